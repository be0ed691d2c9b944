#include "mwt/moran.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "mwt/error.hpp"

namespace mwt {

namespace {

// n * n must fit in int64 for the exact sum-of-squares bookkeeping.
constexpr std::int64_t kMaxPopulation = std::int64_t{1} << 31;

void check_population(std::int64_t n, int m) {
  if (n < 2) throw InvalidArgument("population size must be at least 2, got " + std::to_string(n));
  if (n > kMaxPopulation) throw InvalidArgument("population size exceeds 2^31");
  if (m < 1) throw InvalidArgument("number of mutation levels must be at least 1");
}

void check_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("mutation rate must be finite and >= 0");
}

}  // namespace

void SimBudget::validate() const {
  if (max_events == 0) throw InvalidArgument("event budget must be positive");
  if (!(max_time > 0.0)) throw InvalidArgument("time budget must be positive");
}

MoranProcess::MoranProcess(PopulationState state, double mu, int first_mutating_type)
    : state_(std::move(state)), mu_(mu), first_mutating_(first_mutating_type) {
  for (auto c : state_.counts) sum_sq_ += c * c;
  while (lowest_ < state_.levels() && state_.counts[lowest_] == 0) ++lowest_;
}

double MoranProcess::replacement_rate() const noexcept {
  const auto n = state_.n;
  return static_cast<double>(n * n - sum_sq_) / static_cast<double>(n);
}

double MoranProcess::mutation_rate() const noexcept {
  const auto& c = state_.counts;
  std::int64_t mutable_count = state_.n - c.back();
  for (int j = 0; j < first_mutating_; ++j) mutable_count -= c[j];
  return mu_ * static_cast<double>(mutable_count);
}

void MoranProcess::move_one(int from, int to) noexcept {
  auto& c = state_.counts;
  sum_sq_ += 2 * (c[to] - c[from] + 1);
  --c[from];
  ++c[to];
  while (lowest_ < state_.levels() && c[lowest_] == 0) ++lowest_;
  assert(std::accumulate(c.begin(), c.end(), std::int64_t{0}) == state_.n);
  assert(c[from] >= 0);
}

std::optional<StepResult> MoranProcess::advance(Rng& rng) {
  const double replace = replacement_rate();
  const double mutate = mutation_rate();
  const double total = replace + mutate;
  if (!(total > 0.0)) return std::nullopt;

  const double dt = rng.exponential(total);
  const double u = rng.uniform() * total;
  const auto& c = state_.counts;
  const int m = state_.levels();
  const auto n = state_.n;

  Event event{};
  if (u < mutate) {
    int j = lowest_;
    if (!homogeneous()) {
      // Choose the mutating type proportionally to counts[j], j in [first, m).
      double x = u / mu_;
      const int first = std::max(first_mutating_, lowest_);
      int last_nonzero = first;
      for (j = first; j < m; ++j) {
        if (c[j] == 0) continue;
        last_nonzero = j;
        x -= static_cast<double>(c[j]);
        if (x < 0.0) break;
      }
      if (j >= m) j = last_nonzero;
    }
    event = Event{EventKind::Mutation, j, j + 1};
  } else {
    // Victim type k with weight c_k (n - c_k), then parent among the other
    // n - c_k individuals.
    double x = (u - mutate) * static_cast<double>(n);
    int k = lowest_;
    int last_victim = lowest_;
    for (k = lowest_; k <= m; ++k) {
      if (c[k] == 0 || c[k] == n) continue;
      last_victim = k;
      x -= static_cast<double>(c[k]) * static_cast<double>(n - c[k]);
      if (x < 0.0) break;
    }
    if (k > m) k = last_victim;

    double y = rng.uniform() * static_cast<double>(n - c[k]);
    int j = lowest_;
    int last_parent = -1;
    for (j = lowest_; j <= m; ++j) {
      if (j == k || c[j] == 0) continue;
      last_parent = j;
      y -= static_cast<double>(c[j]);
      if (y < 0.0) break;
    }
    if (j > m) j = last_parent;
    event = Event{EventKind::Replacement, j, k};
  }

  if (event.kind == EventKind::Mutation) {
    move_one(event.from, event.to);
  } else {
    move_one(event.to, event.from);
  }
  state_.clock += dt;
  return StepResult{event, dt};
}

PopulationState new_population(std::int64_t n, int m) {
  check_population(n, m);
  PopulationState state;
  state.counts.assign(static_cast<std::size_t>(m) + 1, 0);
  state.counts[0] = n;
  state.n = n;
  return state;
}

RateTable effective_rates(const PopulationState& state, double mu) {
  RateTable table;
  const auto& c = state.counts;
  const int m = state.levels();
  const double n = static_cast<double>(state.n);
  for (int j = 0; j <= m; ++j) {
    for (int k = 0; k <= m; ++k) {
      if (j == k) continue;
      const double rate = static_cast<double>(c[j]) * static_cast<double>(c[k]) / n;
      if (rate > 0.0) table.entries.push_back({Event{EventKind::Replacement, j, k}, rate});
    }
  }
  for (int j = 0; j < m; ++j) {
    const double rate = mu * static_cast<double>(c[j]);
    if (rate > 0.0) table.entries.push_back({Event{EventKind::Mutation, j, j + 1}, rate});
  }
  for (const auto& e : table.entries) table.total_rate += e.rate;
  return table;
}

std::optional<StepResult> step(PopulationState& state, double mu, Rng& rng) {
  if (state.absorbed()) throw AbsorbedState("population already contains a type-m individual");
  MoranProcess process(std::move(state), mu);
  auto result = process.advance(rng);
  state = process.state();
  return result;
}

TauSample simulate_tau(std::int64_t n, double mu, int m, const SimBudget& budget, Rng& rng) {
  check_population(n, m);
  check_mu(mu);
  budget.validate();

  MoranProcess process(new_population(n, m), mu);
  const auto& state = process.state();
  TauSample sample;
  while (true) {
    if (sample.events >= budget.max_events) {
      sample.tau = state.clock;
      sample.truncated = true;
      break;
    }
    if (!process.advance(rng)) {
      throw Stalled("no further events possible before a type-" + std::to_string(m) +
                    " individual appeared (mu = 0?)");
    }
    ++sample.events;
    if (state.clock > budget.max_time) {
      sample.tau = budget.max_time;
      sample.truncated = true;
      break;
    }
    if (state.absorbed()) {
      sample.tau = state.clock;
      break;
    }
  }
  sample.fixations = process.lowest_type();
  return sample;
}

OccupationResult simulate_two_type_occupation(std::int64_t n, Rng& rng) {
  check_population(n, 1);
  OccupationResult result;
  result.occupation.assign(static_cast<std::size_t>(n) + 1, 0.0);
  const double nd = static_cast<double>(n);
  std::int64_t k = 1;
  double t = 0.0;
  while (k > 0 && k < n) {
    const double kd = static_cast<double>(k);
    const double dt = rng.exponential(2.0 * kd * (nd - kd) / nd);
    result.occupation[static_cast<std::size_t>(k)] += dt;
    t += dt;
    k += rng.uniform() < 0.5 ? 1 : -1;
  }
  result.absorb_time = t;
  result.fixated = (k == n);
  return result;
}

std::vector<std::vector<std::int64_t>> observe_trajectory(std::int64_t n, double mu, int m,
                                                          double horizon,
                                                          std::span<const double> grid,
                                                          Rng& rng) {
  check_population(n, m);
  check_mu(mu);
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("grid must be sorted");
  if (!grid.empty() && (grid.front() < 0.0 || grid.back() > horizon)) {
    throw InvalidArgument("grid times must lie in [0, horizon]");
  }

  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(grid.size());
  MoranProcess process(new_population(n, m), mu);
  std::size_t next = 0;
  while (next < grid.size()) {
    const auto before = process.state().counts;
    if (!process.advance(rng)) break;
    const double now = process.state().clock;
    while (next < grid.size() && grid[next] < now) {
      rows.push_back(before);
      ++next;
    }
  }
  while (rows.size() < grid.size()) rows.push_back(process.state().counts);
  return rows;
}

FamilyOutcome simulate_single_mutant(std::int64_t n, double mu, int m, const SimBudget& budget,
                                     Rng& rng) {
  check_population(n, m);
  check_mu(mu);
  budget.validate();
  if (m < 2) return FamilyOutcome::TypeMBorn;

  PopulationState start = new_population(n, m);
  start.counts[0] = n - 1;
  start.counts[1] = 1;
  MoranProcess process(std::move(start), mu, 1);
  const auto& state = process.state();
  for (std::uint64_t events = 0; events < budget.max_events; ++events) {
    if (!process.advance(rng)) return FamilyOutcome::Lost;
    if (state.absorbed()) return FamilyOutcome::TypeMBorn;
    if (state.clock > budget.max_time) return FamilyOutcome::Truncated;
  }
  return FamilyOutcome::Truncated;
}

}  // namespace mwt
