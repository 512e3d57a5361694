#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "metrika/condition.hpp"
#include "metrika/eval.hpp"

using namespace metrika;

static void BM_TriangleSentence(benchmark::State& state) {
  const PresentedStructure m = bench::space(static_cast<std::size_t>(state.range(0)), 1);
  const Formula tri = parse_formula("sup x. sup y. sup z. (d(x,z) -. (d(x,y) +. d(y,z)))", Signature());
  const CompiledFormula cf(tri);
  for (auto _ : state) benchmark::DoNotOptimize(cf.evaluate(m, {}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TriangleSentence)->RangeMultiplier(2)->Range(4, 32)->Complexity(benchmark::oNCubed);

static void BM_PrefixBounds(benchmark::State& state) {
  const PresentedStructure m = bench::space(static_cast<std::size_t>(state.range(0)), 2);
  const Formula f = parse_formula("sup x. inf y. max(absdiff(d(x,y), 1/2), d(x,x))", Signature());
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_prefix_bounds(f, m));
}
BENCHMARK(BM_PrefixBounds)->Arg(4)->Arg(16)->Arg(64);

static void BM_Parse(benchmark::State& state) {
  const std::string text = "sup x. sup y. inf z. max(absdiff(d(x,z), 1/4), absdiff(d(y,z), 3/4))";
  for (auto _ : state) benchmark::DoNotOptimize(parse_formula(text, Signature()));
}
BENCHMARK(BM_Parse);
