#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "snp/error.hpp"
#include "snp/spike_regex.hpp"

using snp::SpikeExpr;

TEST_CASE("parse builds the expected trees") {
  CHECK(snp::parse_spike_expr("a^3") == SpikeExpr::power(SpikeExpr::atom(), 3));
  CHECK(snp::parse_spike_expr("a(aa)*") ==
        SpikeExpr::concat({SpikeExpr::atom(),
                           SpikeExpr::star(SpikeExpr::concat({SpikeExpr::atom(), SpikeExpr::atom()}))}));
  CHECK(snp::parse_spike_expr("a | a^2") ==
        SpikeExpr::alt({SpikeExpr::atom(), SpikeExpr::power(SpikeExpr::atom(), 2)}));
  CHECK(snp::parse_spike_expr("a+") == SpikeExpr::plus(SpikeExpr::atom()));
  CHECK(snp::parse_spike_expr("(a)") == SpikeExpr::atom());
}

TEST_CASE("parse rejects malformed guards") {
  for (const char* bad : {"a^(", "", "  ", "(a", "a)", "()", "a|", "|a", "b", "a^", "a^x", "*"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(snp::parse_spike_expr(bad), snp::ParseError);
  }
  try {
    snp::parse_spike_expr("aa^(");
    FAIL("expected a parse error");
  } catch (const snp::ParseError& e) {
    CHECK(e.column() == 4);
  }
}

TEST_CASE("compile of simple sets") {
  auto universal = snp::compile(snp::parse_spike_expr("a*"));
  for (std::uint64_t n = 0; n < 100; ++n) CHECK(universal.contains(n));

  auto two = snp::compile(snp::parse_spike_expr("a^2"));
  CHECK(two.contains(2));
  CHECK_FALSE(two.contains(3));
  for (std::uint64_t n = 0; n < 50; ++n) CHECK(two.contains(n) == (n == 2));
  CHECK(two.singleton() == 2u);
  CHECK(two.finite());

  auto empty_word = snp::compile(snp::parse_spike_expr("a^0"));
  CHECK(empty_word.contains(0));
  CHECK_FALSE(empty_word.contains(1));
}

TEST_CASE("a(aa)* matches exactly the odd counts") {
  auto e = snp::parse_spike_expr("a(aa)*");
  auto set = snp::compile(e);
  oracle::UnaryNfa nfa(e);
  for (std::uint64_t n = 0; n <= 200; ++n) {
    CAPTURE(n);
    CHECK(nfa.accepts(n) == (n % 2 == 1));
    CHECK(set.contains(n) == (n % 2 == 1));
  }
  CHECK(set.contains(41));
  CHECK_FALSE(set.singleton().has_value());
}

TEST_CASE("size cap") {
  auto big = snp::parse_spike_expr("a^300");
  CHECK_THROWS_AS(snp::compile(big), snp::SizeCapExceeded);
  CHECK_NOTHROW(snp::compile(big, 400));
  CHECK(snp::expanded_size(big) == 301);
}

TEST_CASE("compile agrees with both oracles on random expressions") {
  std::mt19937_64 rng(12345);
  int checked = 0;
  while (checked < 200) {
    auto e = oracle::random_expr(rng, 3);
    if (snp::expanded_size(e) > snp::kDefaultGuardSizeCap) continue;
    auto set = snp::compile(e);
    const std::uint64_t limit = 3 * (set.threshold() + set.period()) + 64;
    oracle::UnaryNfa nfa(e);
    auto lengths = oracle::matched_lengths(e, limit);
    for (std::uint64_t n = 0; n <= limit; ++n) {
      const bool got = set.contains(n);
      if (got != nfa.accepts(n) || got != lengths[n]) {
        FAIL("mismatch for " << snp::render_spike_expr(e) << " at n=" << n);
      }
    }
    ++checked;
  }
}

TEST_CASE("render then parse is the identity") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    auto e = oracle::random_expr(rng, 4);
    auto text = snp::render_spike_expr(e);
    CAPTURE(text);
    CHECK(snp::parse_spike_expr(text) == e);
  }
  CHECK(snp::render_spike_expr(snp::parse_spike_expr("a ( a a ) *")) == "a(aa)*");
}

TEST_CASE("compile is deterministic") {
  auto e = snp::parse_spike_expr("(aaa)*|a^2(aa)+");
  auto first = snp::compile(e);
  auto second = snp::compile(e);
  CHECK(first == second);
  CHECK(first.table().size() == first.threshold() + first.period());
}
