#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "metrika/compare.hpp"
#include "metrika/polish.hpp"

using namespace metrika;

static void BM_BackAndForth(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PresentedStructure a = bench::space(n, 6), b = bench::space(n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(back_and_forth(a, b, Rational(1, 4), 4, 100'000));
}
BENCHMARK(BM_BackAndForth)->Arg(8)->Arg(16);

static void BM_Distortion(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PresentedStructure a = bench::space(n, 8), b = bench::space(n, 9);
  PointPairs pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, n - 1 - i);
  for (auto _ : state) benchmark::DoNotOptimize(distortion(pairs, a, b));
}
BENCHMARK(BM_Distortion)->Arg(8)->Arg(32);

static void BM_Encode(benchmark::State& state) {
  const PresentedStructure m = bench::space(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(encode(m));
}
BENCHMARK(BM_Encode)->Arg(8)->Arg(64);
