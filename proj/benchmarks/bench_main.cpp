#include <benchmark/benchmark.h>

#include <cmath>

#include "ulamkit/corpus.hpp"
#include "ulamkit/dynamics.hpp"
#include "ulamkit/quad.hpp"

using namespace ulamkit;

namespace {

RiccatiSolution rho_of(const CorpusEntry& e) {
  return RiccatiSolution::analytic(expr::parse(e.rho), e.problem.params);
}

void BM_AnalyzeFirstExample(benchmark::State& state) {
  const CorpusEntry e = example1();
  for (auto _ : state) {
    StabilityReport r = analyze_entry(e, true);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_AnalyzeFirstExample)->Unit(benchmark::kMillisecond);

void BM_AnalyzeBessel(benchmark::State& state) {
  const CorpusEntry e = example4(1.0);
  for (auto _ : state) {
    StabilityReport r = analyze_entry(e, true);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_AnalyzeBessel)->Unit(benchmark::kMillisecond);

void BM_Cumulative(benchmark::State& state) {
  const Interval I = Interval::open(0, kInf);
  for (auto _ : state) {
    auto c = quad::cumulative([](double t) { return Complex(std::exp(-t) / (1 + t)); }, 1.0, I);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_Cumulative)->Unit(benchmark::kMicrosecond);

void BM_ContextBuild(benchmark::State& state) {
  const CorpusEntry e = example3(1.0);
  const RiccatiSolution rho = rho_of(e);
  for (auto _ : state) {
    const AnalysisContext ctx(e.problem, rho);
    benchmark::DoNotOptimize(ctx.covered_upper());
  }
}
BENCHMARK(BM_ContextBuild)->Unit(benchmark::kMicrosecond);

void BM_RandomTest(benchmark::State& state) {
  const CorpusEntry e = example1();
  const AnalysisContext ctx(e.problem, rho_of(e));
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    RandomTestResult r = random_perturbation_test(ctx, Case::kIII, 0.1, trials, 7, 0.5);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_RandomTest)->Arg(4)->Arg(32)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
