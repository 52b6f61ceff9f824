#include <benchmark/benchmark.h>

#include <cstdint>

#include "threshold_lab/bayes.hpp"
#include "threshold_lab/binomial.hpp"
#include "threshold_lab/gaussian.hpp"
#include "threshold_lab/log_space.hpp"
#include "threshold_lab/sweep.hpp"

namespace {

using namespace threshold_lab;

void BM_LogGamma(benchmark::State& state) {
  double x = 17.25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_gamma(x));
    x += 1.0;
    if (x > 1e5) x = 17.25;
  }
}
BENCHMARK(BM_LogGamma);

void BM_LogPmf(benchmark::State& state) {
  const auto n = state.range(0);
  const BinomialOutcome outcome(n, n / 2 + n / 20);
  for (auto _ : state) benchmark::DoNotOptimize(log_pmf(outcome, BinomialModel::null()));
}
BENCHMARK(BM_LogPmf)->Arg(100)->Arg(10000)->Arg(100000);

// O(n) tail sum from the extreme term inward.
void BM_PValueTwoSided(benchmark::State& state) {
  const auto n = state.range(0);
  const BinomialOutcome outcome(n, n / 2 + n / 50 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(p_value(outcome, TailConvention::TwoSidedSymmetric));
  state.SetComplexityN(n);
}
BENCHMARK(BM_PValueTwoSided)->RangeMultiplier(4)->Range(16, 65536)->Complexity(benchmark::oN);

void BM_SelectBarelySignificant(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(select_barely_significant(n, 0.01));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SelectBarelySignificant)->RangeMultiplier(4)->Range(16, 65536)->Complexity(benchmark::oN);

void BM_NormalQuantile(benchmark::State& state) {
  double q = 1e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_quantile(q));
    q *= 1.37;
    if (q >= 1.0) q = 1e-9;
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_DefaultSweep(benchmark::State& state) {
  const SweepGrid grid;
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(grid, threads));
}
BENCHMARK(BM_DefaultSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FindCrossing(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_crossing(0.01, 0.5));
}
BENCHMARK(BM_FindCrossing)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
