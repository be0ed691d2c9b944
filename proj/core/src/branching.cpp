#include "mwt/branching.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "mwt/error.hpp"
#include "mwt/limits.hpp"
#include "mwt/special.hpp"

namespace mwt {

namespace {

void check_model5(double n, double mu, int m, int j, double horizon) {
  if (!(n > 0.0)) throw InvalidArgument("population size must be positive");
  if (!(mu >= 0.0)) throw InvalidArgument("mutation rate must be >= 0");
  if (j < 1 || j > m - 1) throw InvalidArgument("model 5 needs 1 <= j <= m - 1");
  if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be >= 0");
}

double immigration_rate(double scale, int power, double s) { return scale * std::pow(s, power); }

}  // namespace

BranchingOutcome simulate_q(int m, double mu, const SimBudget& budget, Rng& rng) {
  if (m < 2) throw InvalidArgument("simulate_q needs m >= 2");
  if (!(mu >= 0.0)) throw InvalidArgument("mutation rate must be >= 0");
  budget.validate();

  // counts[i] for types 1..m-1; index 0 unused so indices match types.
  BranchingState state;
  state.counts.assign(static_cast<std::size_t>(m), 0);
  state.counts[1] = 1;
  std::int64_t total = 1;
  const bool timed = std::isfinite(budget.max_time);
  const double per_capita = 2.0 + mu;
  const double birth_cut = 1.0 / per_capita;
  const double death_cut = 2.0 / per_capita;

  for (std::uint64_t events = 0; events < budget.max_events; ++events) {
    if (timed) {
      state.clock += rng.exponential(per_capita * static_cast<double>(total));
      if (state.clock > budget.max_time) return BranchingOutcome::Truncated;
    }
    // Pick the acting individual's type, then what happens to it.
    int type = 1;
    if (m > 2) {
      double x = rng.uniform() * static_cast<double>(total);
      for (type = 1; type < m - 1; ++type) {
        x -= static_cast<double>(state.counts[type]);
        if (x < 0.0) break;
      }
      while (state.counts[type] == 0) --type;
    }
    const double u = rng.uniform();
    if (u < birth_cut) {
      ++state.counts[type];
      ++total;
    } else if (u < death_cut) {
      --state.counts[type];
      --total;
      assert(state.counts[type] >= 0);
      if (total == 0) return BranchingOutcome::Extinct;
    } else {
      if (type + 1 == m) return BranchingOutcome::TypeMBorn;
      --state.counts[type];
      ++state.counts[type + 1];
    }
  }
  return BranchingOutcome::Truncated;
}

std::optional<double> two_type_mutation_time(double r, double horizon, Rng& rng) {
  if (!(r >= 0.0)) throw InvalidArgument("mutation rate must be >= 0");
  if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be >= 0");
  const double per_capita = 2.0 + r;
  const double birth_cut = 1.0 / per_capita;
  const double death_cut = 2.0 / per_capita;
  std::int64_t k = 1;
  double t = 0.0;
  while (true) {
    t += rng.exponential(per_capita * static_cast<double>(k));
    if (t > horizon) return std::nullopt;
    const double u = rng.uniform();
    if (u < birth_cut) {
      ++k;
    } else if (u < death_cut) {
      if (--k == 0) return std::nullopt;
    } else {
      return t;
    }
  }
}

bool simulate_two_type_mutation(double r, double horizon, Rng& rng) {
  return two_type_mutation_time(r, horizon, rng).has_value();
}

std::optional<double> model5_success_time(double n, double mu, int m, int j, double horizon,
                                          Rng& rng) {
  check_model5(n, mu, m, j, horizon);
  if (mu == 0.0 || horizon == 0.0) return std::nullopt;

  const int power = m - j - 1;
  const double scale = n * std::pow(mu, m - j) * inverse_factorial(power);
  // The immigration rate is nondecreasing in s, so its value at the horizon
  // bounds it on [0, horizon] and thinning against it is exact.
  const double envelope = immigration_rate(scale, power, horizon);
  const double success = mu * p_recursion(mu, j);
  const double per_capita = 2.0 + success;

  std::int64_t k = 0;
  double t = 0.0;
  while (true) {
    const double individual_rate = per_capita * static_cast<double>(k);
    const double total = envelope + individual_rate;
    t += rng.exponential(total);
    if (t > horizon) return std::nullopt;
    const double u = rng.uniform() * total;
    if (u < envelope) {
      if (u < immigration_rate(scale, power, t)) ++k;
      continue;
    }
    const double v = (u - envelope) / static_cast<double>(k);
    if (v < 1.0) {
      ++k;
    } else if (v < 2.0) {
      --k;
    } else {
      return t;
    }
  }
}

bool simulate_model5(double n, double mu, int m, int j, double horizon, Rng& rng) {
  return model5_success_time(n, mu, m, j, horizon, rng).has_value();
}

double model5_expected_immigrants(double n, double mu, int m, int j, double t) {
  check_model5(n, mu, m, j, t);
  return n * std::pow(mu, m - j) * std::pow(t, m - j) * inverse_factorial(m - j);
}

std::int64_t model5_immigrant_count(double n, double mu, int m, int j, double horizon, Rng& rng) {
  check_model5(n, mu, m, j, horizon);
  if (mu == 0.0 || horizon == 0.0) return 0;
  const int power = m - j - 1;
  const double scale = n * std::pow(mu, m - j) * inverse_factorial(power);
  const double envelope = immigration_rate(scale, power, horizon);
  std::int64_t count = 0;
  double t = 0.0;
  while (true) {
    t += rng.exponential(envelope);
    if (t > horizon) return count;
    if (rng.uniform() * envelope < immigration_rate(scale, power, t)) ++count;
  }
}

}  // namespace mwt
