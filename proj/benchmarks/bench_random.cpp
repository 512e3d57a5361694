#include <benchmark/benchmark.h>

#include "metrika/condition.hpp"
#include "metrika/random.hpp"

using namespace metrika;

static void BM_SampleSpace(benchmark::State& state) {
  MeasureSpec spec;
  spec.kind = state.range(1) ? SamplerKind::RejectionUniform : SamplerKind::SequentialUniform;
  Rng rng = trial_rng(5, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_space(static_cast<std::size_t>(state.range(0)), spec, rng));
}
BENCHMARK(BM_SampleSpace)->Args({4, 0})->Args({4, 1})->Args({12, 0});

static void BM_InvarianceAudit(benchmark::State& state) {
  MeasureSpec spec;
  spec.kind = SamplerKind::RejectionUniform;
  const Formula phi = parse_formula("d(x,y)", Signature());
  for (auto _ : state) benchmark::DoNotOptimize(invariance_audit(spec, 4, 1000, phi, Rational(1, 2)));
}
BENCHMARK(BM_InvarianceAudit)->Unit(benchmark::kMillisecond);
