#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mwt/rng.hpp"

namespace mwt {

/// Caps on a single replicate. A run that hits either cap is reported as
/// truncated instead of being silently returned.
struct SimBudget {
  std::uint64_t max_events = 1'000'000'000ULL;
  double max_time = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// Lumped state of the Moran population: counts[j] individuals carry exactly
/// j mutations. Individuals are exchangeable, so this is a sufficient statistic.
struct PopulationState {
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;
  double clock = 0.0;

  int levels() const noexcept { return static_cast<int>(counts.size()) - 1; }
  bool absorbed() const noexcept { return counts.back() > 0; }
};

enum class EventKind { Replacement, Mutation };

/// Replacement: an individual of type `to` dies and is replaced by the
/// offspring of a type `from` parent. Mutation: one type `from` individual
/// becomes type `to` == from + 1.
struct Event {
  EventKind kind;
  int from;
  int to;

  friend bool operator==(const Event&, const Event&) = default;
};

struct RateEntry {
  Event event;
  double rate;
};

struct RateTable {
  std::vector<RateEntry> entries;
  double total_rate = 0.0;
};

struct StepResult {
  Event event;
  double dt;
};

struct TauSample {
  double tau = 0.0;
  std::uint64_t events = 0;
  int fixations = 0;
  bool truncated = false;

  friend bool operator==(const TauSample&, const TauSample&) = default;
};

struct OccupationResult {
  double absorb_time = 0.0;
  std::vector<double> occupation;  // index k in [0, n]; only 1..n-1 can be nonzero
  bool fixated = false;
};

enum class FamilyOutcome { TypeMBorn, Lost, Truncated };

/// Continuous-time Moran process with m mutation levels and same-type
/// replacements elided. Keeps the sum of squared counts and the lowest
/// occupied type up to date so that every rate query is O(1) and event
/// selection is O(m).
///
/// advance() does not stop at absorption; callers decide what counts[m] > 0
/// means for them. Type m never mutates.
class MoranProcess {
 public:
  /// first_mutating_type is 0 for the standard model; 1 disables type-1
  /// mutations so that only an initial mutant family can progress.
  MoranProcess(PopulationState state, double mu, int first_mutating_type = 0);

  const PopulationState& state() const noexcept { return state_; }
  double replacement_rate() const noexcept;
  double mutation_rate() const noexcept;
  double total_rate() const noexcept { return replacement_rate() + mutation_rate(); }
  bool homogeneous() const noexcept { return sum_sq_ == state_.n * state_.n; }
  int lowest_type() const noexcept { return lowest_; }

  /// Draws and applies the next effective transition. Returns nullopt when
  /// the total rate is zero.
  std::optional<StepResult> advance(Rng& rng);

 private:
  void move_one(int from, int to) noexcept;

  PopulationState state_;
  double mu_;
  int first_mutating_;
  std::int64_t sum_sq_ = 0;
  int lowest_ = 0;
};

/// All n individuals of type 0 at time zero.
PopulationState new_population(std::int64_t n, int m);

/// Every positive-rate effective transition out of `state`.
RateTable effective_rates(const PopulationState& state, double mu);

/// One Gillespie step on `state`. Throws AbsorbedState if counts[m] > 0.
/// Returns nullopt (state untouched) when no event is possible.
std::optional<StepResult> step(PopulationState& state, double mu, Rng& rng);

/// Waiting time until the first type-m individual appears.
/// Throws Stalled if the chain stops moving first (mu == 0).
TauSample simulate_tau(std::int64_t n, double mu, int m, const SimBudget& budget, Rng& rng);

/// Pure replacement dynamics started from a single type-1 individual among
/// n - 1 type-0 individuals, run until the mutant is lost or fixes.
OccupationResult simulate_two_type_occupation(std::int64_t n, Rng& rng);

/// Counts X_0..X_m at each grid time from one replicate. The run is not
/// stopped at tau_m: type m just stops mutating.
std::vector<std::vector<std::int64_t>> observe_trajectory(std::int64_t n, double mu, int m,
                                                          double horizon,
                                                          std::span<const double> grid, Rng& rng);

/// One type-1 individual among n - 1 type-0 individuals, no further type-1
/// mutations. TypeMBorn if a type-m individual is ever born, Lost if the
/// family dies out first.
FamilyOutcome simulate_single_mutant(std::int64_t n, double mu, int m, const SimBudget& budget,
                                     Rng& rng);

}  // namespace mwt
