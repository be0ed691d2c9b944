#include <benchmark/benchmark.h>

#include "mwt/branching.hpp"

using namespace mwt;

static void BM_SimulateQ(benchmark::State& state) {
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_q(static_cast<int>(state.range(0)), 1e-3, {}, rng));
}
BENCHMARK(BM_SimulateQ)->Arg(2)->Arg(3);

static void BM_TwoTypeMutation(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_two_type_mutation(1e-4, 100.0, rng));
}
BENCHMARK(BM_TwoTypeMutation);

static void BM_Model5(benchmark::State& state) {
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(model5_success_time(1e4, 1e-4, 2, 1, 100.0, rng));
}
BENCHMARK(BM_Model5);
