#include <benchmark/benchmark.h>

#include "mwt/moran.hpp"

using namespace mwt;

// One event on a mixed population.
static void BM_Advance(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  PopulationState s = new_population(10000, m);
  s.counts[0] = 9000;
  for (int j = 1; j < m; ++j) s.counts[j] = 1000 / (m - 1);
  s.counts[0] += 1000 - (1000 / (m - 1)) * (m - 1);
  Rng rng(1);
  MoranProcess p(s, 1e-3);
  for (auto _ : state) {
    auto r = p.advance(rng);
    if (p.state().absorbed() || p.homogeneous()) {
      state.PauseTiming();
      p = MoranProcess(s, 1e-3);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Advance)->Arg(2)->Arg(4)->Arg(8);

static void BM_SimulateTau(benchmark::State& state) {
  const auto n = state.range(0);
  const double mu = 1.0 / static_cast<double>(state.range(1));
  Rng rng(2);
  std::uint64_t events = 0;
  for (auto _ : state) {
    const auto s = simulate_tau(n, mu, 2, {}, rng);
    events += s.events;
    benchmark::DoNotOptimize(s);
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateTau)->Args({100, 1000000})->Args({10000, 100})->Args({1000, 100000});

static void BM_TwoTypeOccupation(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_two_type_occupation(state.range(0), rng));
}
BENCHMARK(BM_TwoTypeOccupation)->Arg(100)->Arg(10000);
BENCHMARK_MAIN();
