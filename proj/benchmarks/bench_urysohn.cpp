#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "metrika/synth.hpp"
#include "metrika/urysohn.hpp"

using namespace metrika;

static void BM_ExtensionReport(benchmark::State& state) {
  const PresentedStructure m = bench::space(static_cast<std::size_t>(state.range(0)), 3);
  const auto corpus = TheorySpec::empty_metric().corpus();
  for (auto _ : state) benchmark::DoNotOptimize(extension_property_report(m, Rational(1, 8), corpus));
}
BENCHMARK(BM_ExtensionReport)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_KatetovWitness(benchmark::State& state) {
  const PresentedStructure m = bench::space(static_cast<std::size_t>(state.range(0)), 4);
  const DistanceConfiguration theta = configuration_of(m, std::vector<std::size_t>{0, 1, 2});
  const std::size_t pts[] = {0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(katetov_witness(m, theta, pts, Rational(1, 12)));
}
BENCHMARK(BM_KatetovWitness)->Arg(8)->Arg(64);

static void BM_GridConfigurations(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(grid_configurations(static_cast<std::size_t>(state.range(0)), 4));
}
BENCHMARK(BM_GridConfigurations)->DenseRange(2, 4);
