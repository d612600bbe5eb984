#include <benchmark/benchmark.h>

#include "snp/spike_regex.hpp"

namespace {

void BM_CompileGuard(benchmark::State& state, const char* text) {
  const auto expr = snp::parse_spike_expr(text);
  for (auto _ : state) benchmark::DoNotOptimize(snp::compile(expr));
}
BENCHMARK_CAPTURE(BM_CompileGuard, power, "a^64");
BENCHMARK_CAPTURE(BM_CompileGuard, odd, "a(aa)*");
BENCHMARK_CAPTURE(BM_CompileGuard, mixed, "(a^3)*(a^5|a^7)+|a^2(aa)*");

void BM_Contains(benchmark::State& state) {
  const auto set = snp::compile(snp::parse_spike_expr("(a^3)*(a^5|a^7)+"));
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(set.contains(n++));
}
BENCHMARK(BM_Contains);

}  // namespace
