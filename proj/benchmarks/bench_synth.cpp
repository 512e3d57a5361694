#include <benchmark/benchmark.h>

#include "metrika/synth.hpp"

using namespace metrika;

static void BM_EcCloseEmptyMetric(benchmark::State& state) {
  const PresentedStructure seed = PresentedStructure::from_distances({{Rational(0)}});
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ec_close_run(seed, TheorySpec::empty_metric(), 1'000'000, Rational(1, 8), ++s));
}
BENCHMARK(BM_EcCloseEmptyMetric)->Unit(benchmark::kMillisecond);

static void BM_EcCloseGraph(benchmark::State& state) {
  const PresentedStructure seed = PresentedStructure::tabulate(
      Signature::graph(), 1, [](std::size_t r, std::span<const std::size_t>) { return r == 0 ? Rational(0) : Rational(1); });
  std::uint64_t s = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ec_close_run(seed, TheorySpec::graph(static_cast<std::size_t>(state.range(0))), 2'000'000, Rational(1, 8), ++s));
}
BENCHMARK(BM_EcCloseGraph)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
