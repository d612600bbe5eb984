#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include "generators.hpp"
#include "snp/devices.hpp"
#include "snp/error.hpp"
#include "snp/lang.hpp"

using namespace snp;

namespace {

constexpr const char* kAdderSource = R"(system adder
mode standard
neuron in1 spikes 0
  rule a -> a
neuron in2 spikes 0
  rule a -> a
neuron add spikes 0
  rule a -> a
  rule a^2 / a^1 -> lambda
  rule a^3 / a^2 -> a
syn in1 add
syn in2 add
input in1 in2
output add
)";

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse the adder source") {
  auto src = parse_system(kAdderSource);
  const auto& def = src.system.def();
  CHECK(def.name == "adder");
  CHECK(def.neurons.size() == 3);
  CHECK(def.synapses.size() == 2);
  CHECK(def.inputs == std::vector<std::string>{"in1", "in2"});
  CHECK(def.output == "add");
  CHECK(def.neurons[2].rules.size() == 3);
  CHECK(def.neurons[2].rules[1] == RuleDef::make("a^2", 1, 0));
  CHECK(def == devices::adder_device().system.def());
  CHECK(src.neuron_spans.at("add").line == 7);
  CHECK(src.rule_spans[2][2].line == 10);
}

TEST_CASE("mode and defaults") {
  auto ex = parse_system("mode exhaustive\nneuron x spikes 2\n  rule a+ / a -> a\n");
  CHECK(ex.system.mode() == Mode::Exhaustive);
  auto plain = parse_system("neuron x\n");
  CHECK(plain.system.mode() == Mode::Standard);
  CHECK(plain.system.def().name == "snp");
  CHECK(plain.system.neuron(0).initial_spikes == 0);
}

TEST_CASE("duplicate neuron is rejected") {
  std::string text = kAdderSource;
  text += "neuron add spikes 1\n";
  CHECK_THROWS_AS(parse_system(text), ValidationError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_system("neuron x spikes 1\n  rule a^( -> a\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 10);
  }
  try {
    parse_system("neuron x\nsyn x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_system("rule a -> a\n"), ParseError);
  CHECK_THROWS_AS(parse_system("neuron 1x\n"), ParseError);
  CHECK_THROWS_AS(parse_system("neuron x\n  rule a -> b\n"), ParseError);
  CHECK_THROWS_AS(parse_system("neuron x\n  rule a+ -> a\n"), ParseError);
  CHECK_THROWS_AS(parse_system("mode fast\n"), ParseError);
  CHECK_THROWS_AS(parse_system("bogus\n"), ParseError);
}

TEST_CASE("rendering") {
  CHECK(render_rule(RuleDef::make("a^2", 1, 0)) == "a^2 / a -> lambda");
  CHECK(render_rule(RuleDef::bare(3, 1)) == "a^3 -> a");
  CHECK(render_rule(RuleDef::make("a^4", 2, 1)) == "a^4 / a^2 -> a");
  CHECK(render_rule(RuleDef::make("a(aa)*", 1, 2, 3)) == "a(aa)* / a -> a^2 ; 3");

  SystemDef def;
  def.neurons = {{"lonely", 4, {}}};
  auto text = render_system(def);
  CHECK(text.find("neuron lonely spikes 4\n") != std::string::npos);
  CHECK(text.find("rule") == std::string::npos);
  CHECK(text.find("input") == std::string::npos);
}

TEST_CASE("render then parse round trips the devices") {
  std::vector<devices::DeviceHandle> all{devices::adder_device(), devices::equality_device(),
                                         devices::and_gate(),     devices::or_gate(),
                                         devices::not_gate(),     devices::sorter_device(4, 9)};
  for (const auto& d : all) {
    CAPTURE(d.name);
    const auto& def = d.system.def();
    auto text = render_system(def);
    CHECK(parse_system_def(text) == def);
    CHECK(render_system(parse_system_def(text)) == text);
  }
  CHECK(render_system(parse_system(kAdderSource).system.def()) ==
        render_system(devices::adder_device().system.def()));
}

TEST_CASE("render then parse round trips random systems") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    auto def = gen::random_system_def(rng, i);
    CHECK(parse_system_def(render_system(def)) == def);
  }
}

TEST_CASE("export_dot") {
  auto adder = export_dot(devices::adder_device().system.def());
  CHECK(count(adder, "\" -> \"") == 2);
  CHECK(count(adder, "[label=") == 3);
  CHECK(adder.rfind("digraph \"adder\" {", 0) == 0);
  CHECK(adder == export_dot(devices::adder_device().system.def()));

  auto not_dot = export_dot(devices::not_gate().system.def());
  CHECK(count(not_dot, "\" -> \"") == 2);
  CHECK(count(not_dot, "[label=") == 2);

  SystemDef empty;
  CHECK(export_dot(empty) == "digraph \"snp\" {\n}\n");
}
