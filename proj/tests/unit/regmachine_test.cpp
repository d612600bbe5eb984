#include <doctest.h>

#include <array>
#include <random>

#include "oracles.hpp"
#include "snp/error.hpp"
#include "snp/regmachine.hpp"

using namespace snp;
using namespace snp::rm;

namespace {

constexpr const char* kTwo = "l0: ADD 1 l1\nl1: ADD 1 lh\nlh: HALT\n";
constexpr const char* kLoop = "l0: ADD 1 l0\nlh: HALT\n";

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS_AS(parse_machine("l0: HALT\n"), ValidationError);
  CHECK_THROWS_AS(parse_machine("l0: ADD 1 nowhere\nlh: HALT\n"), ValidationError);
  CHECK_THROWS_AS(parse_machine("l0: ADD 1 lh\nl0: SUB 1 lh lh\nlh: HALT\n"), ValidationError);
  CHECK_NOTHROW(parse_machine("l0: ADD 1 lh\nlh: HALT\n"));

  MachineDef def = parse_machine_def("l0: ADD 3 lh\nlh: HALT\n");
  CHECK(def.registers == 3);
  def.registers = 2;
  CHECK_THROWS_AS(validate_machine(def), ValidationError);

  CHECK_THROWS_AS(parse_machine_def("l0: MUL 1 lh\nlh: HALT\n"), ParseError);
  CHECK_THROWS_AS(parse_machine_def("l0: ADD 1 lh\n"), ParseError);
  CHECK_THROWS_AS(parse_machine_def("l0: ADD 0 lh\nlh: HALT\n"), ParseError);
  try {
    parse_machine_def("l0: ADD 1 lh\nlh: HALT\nbad line\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("step semantics") {
  auto m = parse_machine("l0: ADD 1 l1\nl1: SUB 2 l0 l2\nl2: SUB 1 l2 lh\nlh: HALT\n");
  BranchChooser first;
  MachineState s = initial_state(m);
  s.current = *m.index_of("l1");
  auto after = step_machine(m, s, first);
  CHECK(after.current == *m.index_of("l2"));
  CHECK(after.registers == s.registers);
  CHECK(after.steps == s.steps + 1);

  s.registers = {0, 2};
  after = step_machine(m, s, first);
  CHECK(after.registers[1] == 1);
  CHECK(after.current == *m.index_of("l0"));

  s.current = m.halt();
  CHECK_THROWS_AS(step_machine(m, s, first), SimulationError);
}

TEST_CASE("ADD with one successor is deterministic") {
  CHECK(parse_machine(kTwo).deterministic());
  auto nd = parse_machine("l0: ADD 1 l0 lh\nlh: HALT\n");
  CHECK_FALSE(nd.deterministic());
  // Every seed halts with some positive count; replays agree.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c1 = BranchChooser::seeded(seed);
    auto c2 = BranchChooser::seeded(seed);
    auto a = run_generate(nd, 1000, c1);
    auto b = run_generate(nd, 1000, c2);
    CHECK(a == b);
    if (a) CHECK(*a >= 1);
  }
}

TEST_CASE("generating mode") {
  BranchChooser first;
  CHECK(run_generate(parse_machine(kTwo), 100, first) == 2u);
  CHECK(run_generate(parse_machine("l0: ADD 1 lh\nlh: HALT\n"), 100, first) == 1u);
  CHECK_FALSE(run_generate(parse_machine(kLoop), 50, first).has_value());
  CHECK_THROWS_AS(run_generate(parse_machine(kTwo), 0, first), SimulationError);
}

TEST_CASE("accepting mode") {
  auto acceptor = parse_machine("l0: ADD 2 l1\nl1: SUB 1 l1 l2\nl2: SUB 2 l2 lh\nlh: HALT\n");
  const std::array<std::uint64_t, 1> three{3};
  auto v = run_accept(acceptor, three, 100);
  CHECK(v.accepted);
  CHECK(v.halted);
  CHECK(v.final_state.registers == std::vector<std::uint64_t>{0, 0});
  CHECK(v.final_state.steps == 7);
  CHECK(run_accept(acceptor, three, 100, true).accepted);

  auto leaky = parse_machine("l0: ADD 2 l1\nl1: SUB 1 l1 lh\nlh: HALT\n");
  CHECK(run_accept(leaky, three, 100).accepted);
  auto strict = run_accept(leaky, three, 100, true);
  CHECK(strict.halted);
  CHECK_FALSE(strict.accepted);

  auto loop = run_accept(parse_machine(kLoop), three, 100);
  CHECK_FALSE(loop.accepted);
  CHECK_FALSE(loop.halted);

  CHECK_THROWS_AS(run_accept(parse_machine("l0: ADD 1 l0 lh\nlh: HALT\n"), three, 10),
                  SimulationError);
  CHECK_THROWS_AS(run_accept(acceptor, three, 0), SimulationError);
}

TEST_CASE("render then parse") {
  auto m = parse_machine("# comment\nstart: ADD 1 a b\na: SUB 1 a h\nb: ADD 2 h\nh: HALT\n");
  auto again = parse_machine(render_machine(m));
  CHECK(again.program() == m.program());
  CHECK(again.start() == m.start());
  CHECK(again.halt() == m.halt());
}

TEST_CASE("deterministic runs agree with the straight-line oracle") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    const int size = 2 + static_cast<int>(rng() % 7);
    auto raw = oracle::random_raw_machine(rng, size, 3);
    auto m = parse_machine(oracle::raw_to_text(raw));
    BranchChooser first;
    auto got = run_generate(m, 10000, first);
    const long long expect = oracle::run_raw(raw, 3, 0, 10000);
    CAPTURE(oracle::raw_to_text(raw));
    if (expect < 0) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(static_cast<long long>(*got) == expect);
    }
  }
}

TEST_CASE("registers stay non-negative and steps count up by one") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    auto raw = oracle::random_raw_machine(rng, 6, 2);
    auto m = parse_machine(oracle::raw_to_text(raw));
    BranchChooser first;
    MachineState s = initial_state(m);
    for (int k = 0; k < 200 && s.current != m.halt(); ++k) {
      auto next = step_machine(m, s, first);
      CHECK(next.steps == s.steps + 1);
      s = std::move(next);
    }
  }
}
