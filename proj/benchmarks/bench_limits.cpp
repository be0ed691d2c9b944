#include <benchmark/benchmark.h>

#include "mwt/limits.hpp"

using namespace mwt;

static void BM_LambdaJ(benchmark::State& state) {
  const double A = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(lambda_j(A, 3));
}
BENCHMARK(BM_LambdaJ)->Arg(1)->Arg(10)->Arg(1000);

static void BM_HypoexpCdf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hypoexp_gamma_cdf(static_cast<int>(state.range(0)), 1.7, 2.3));
}
BENCHMARK(BM_HypoexpCdf)->Arg(1)->Arg(4);

static void BM_BorderSurvival(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bigmu_border_survival(1.0, static_cast<int>(state.range(0)), 1, 2.0));
}
BENCHMARK(BM_BorderSurvival)->Arg(2)->Arg(4);

static void BM_Classify(benchmark::State& state) {
  double mu = 1e-30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_regime(1e12, mu, 6));
    mu = mu > 1e-2 ? 1e-30 : mu * 1.01;
  }
}
BENCHMARK(BM_Classify);
