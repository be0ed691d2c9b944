#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwt/moran.hpp"
#include "mwt/rng.hpp"

namespace mwt {

/// Per-type counts of a multitype linear birth-death process. Absorbing at
/// all-zero.
struct BranchingState {
  std::vector<std::int64_t> counts;
  double clock = 0.0;
};

enum class BranchingOutcome { TypeMBorn, Extinct, Truncated };

/// One type-1 individual; every individual gives birth and dies at rate 1
/// and a type-i individual turns into type i + 1 at rate mu. Stops at the
/// first type-m individual or extinction. Only the jump chain is simulated
/// unless the budget has a finite time cap.
BranchingOutcome simulate_q(int m, double mu, const SimBudget& budget, Rng& rng);

/// Birth and death at rate 1, mutation to type 2 at rate r, one type-1
/// ancestor. Returns the time of the first type-2 birth if it happens by
/// `horizon`.
std::optional<double> two_type_mutation_time(double r, double horizon, Rng& rng);

/// true iff a type-2 individual is born by `horizon`.
bool simulate_two_type_mutation(double r, double horizon, Rng& rng);

/// Two-type branching process with immigration. Type (m - j) individuals
/// immigrate at rate n mu^{m-j} s^{m-j-1} / (m-j-1)!, give birth and die at
/// rate 1, and succeed (produce a type-m individual) at rate mu * q_j with
/// q_j = p_recursion(mu, j). Returns the first success time by `horizon`.
std::optional<double> model5_success_time(double n, double mu, int m, int j, double horizon,
                                          Rng& rng);

/// true iff any success event occurs by `horizon`.
bool simulate_model5(double n, double mu, int m, int j, double horizon, Rng& rng);

/// Mean number of model-5 immigrants by time t: n mu^{m-j} t^{m-j} / (m-j)!.
double model5_expected_immigrants(double n, double mu, int m, int j, double t);

/// Number of model-5 immigrants by `horizon` (the same thinning scheme as
/// model5_success_time, without births, deaths or successes).
std::int64_t model5_immigrant_count(double n, double mu, int m, int j, double horizon, Rng& rng);

}  // namespace mwt
