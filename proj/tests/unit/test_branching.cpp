#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mwt/branching.hpp"
#include "mwt/error.hpp"
#include "mwt/limits.hpp"
#include "mwt/moran.hpp"

using namespace mwt;

TEST_CASE("simulate_q without mutation always dies out") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto out = simulate_q(2, 0.0, {}, rng);
    CHECK(out == BranchingOutcome::Extinct);
  }
  CHECK_THROWS_AS(simulate_q(1, 0.1, {}, rng), InvalidArgument);
}

TEST_CASE("simulate_q matches p_2") {
  Rng rng(2);
  const double mu = 1e-2;
  const int reps = 100000;
  int born = 0, truncated = 0;
  for (int i = 0; i < reps; ++i) {
    const auto out = simulate_q(2, mu, {}, rng);
    born += out == BranchingOutcome::TypeMBorn;
    truncated += out == BranchingOutcome::Truncated;
  }
  CHECK(truncated == 0);
  const double p = p_recursion(mu, 2);
  CHECK(std::abs(born / static_cast<double>(reps) - p) < 3.3 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("simulate_q with a time cap truncates") {
  Rng rng(3);
  SimBudget b;
  b.max_time = 1e-9;
  int truncated = 0;
  for (int i = 0; i < 100; ++i) truncated += simulate_q(3, 1e-3, b, rng) == BranchingOutcome::Truncated;
  CHECK(truncated > 90);
}

TEST_CASE("two-type mutation edge cases") {
  Rng rng(4);
  CHECK_FALSE(simulate_two_type_mutation(0.5, 0.0, rng));
  CHECK_FALSE(simulate_two_type_mutation(0.0, 100.0, rng));
  int hits = 0;
  for (int i = 0; i < 1000; ++i) hits += simulate_two_type_mutation(1e6, 10.0, rng);
  CHECK(hits <= 1000);
  CHECK(hits > 990);
  for (int i = 0; i < 1000; ++i) {
    const auto t = two_type_mutation_time(0.3, 2.0, rng);
    if (t) CHECK((*t > 0.0 && *t <= 2.0));
  }
}

TEST_CASE("two-type mutation probability at scale r^{-1/2}") {
  Rng rng(5);
  const double r = 1e-4;
  const int reps = 200000;
  int hits = 0;
  for (int i = 0; i < reps; ++i) hits += simulate_two_type_mutation(r, 1.0 / std::sqrt(r), rng);
  const double scaled = hits / static_cast<double>(reps) / std::sqrt(r);
  CHECK(std::abs(scaled - std::tanh(1.0)) < 0.08);
}

TEST_CASE("model 5 degenerate inputs") {
  Rng rng(6);
  CHECK_FALSE(simulate_model5(1e4, 1e-3, 2, 1, 0.0, rng));
  CHECK_FALSE(simulate_model5(1e4, 0.0, 2, 1, 50.0, rng));
  CHECK_THROWS_AS(simulate_model5(1e4, 1e-3, 2, 2, 1.0, rng), InvalidArgument);
  CHECK_THROWS_AS(simulate_model5(1e4, 1e-3, 3, 0, 1.0, rng), InvalidArgument);
  CHECK(model5_immigrant_count(1e4, 1e-3, 3, 1, 0.0, rng) == 0);
}

TEST_CASE("model 5 immigration count matches the integrated rate") {
  Rng rng(7);
  struct Case {
    double n, mu;
    int m, j;
    double horizon;
  };
  for (const auto& c : {Case{1e6, 1e-2, 3, 1, 2.0}, Case{1e4, 1e-2, 2, 1, 30.0},
                        Case{1e9, 1e-2, 4, 1, 3.0}}) {
    const double expected = model5_expected_immigrants(c.n, c.mu, c.m, c.j, c.horizon);
    const int reps = 4000;
    double sum = 0.0;
    for (int i = 0; i < reps; ++i) sum += model5_immigrant_count(c.n, c.mu, c.m, c.j, c.horizon, rng);
    // Poisson: standard error sqrt(expected / reps)
    CAPTURE(c.m);
    CHECK(std::abs(sum / reps - expected) < 3.0 * std::sqrt(expected / reps));
  }
  CHECK(model5_expected_immigrants(1e6, 1e-2, 3, 1, 2.0) == doctest::Approx(200.0));
}

TEST_CASE("model 5 no-success probability tracks the border law") {
  Rng rng(8);
  const double A = 1.0, N = 1e4, mu = A / N;
  const double t = 1.0;
  const int reps = 20000;
  int none = 0;
  for (int i = 0; i < reps; ++i) none += !simulate_model5(N, mu, 2, 1, t / std::sqrt(mu), rng);
  CHECK(std::abs(none / static_cast<double>(reps) - bigmu_border_survival(A, 2, 1, t)) < 0.03);
}

TEST_CASE("moran single mutant agrees with the branching approximation") {
  const double mu = 1e-3;
  const int reps = 40000;
  Rng a(9), b(10);
  int moran = 0, branching = 0, moran_trunc = 0;
  for (int i = 0; i < reps; ++i) {
    const auto f = simulate_single_mutant(10000, mu, 2, {}, a);
    moran += f == FamilyOutcome::TypeMBorn;
    moran_trunc += f == FamilyOutcome::Truncated;
    branching += simulate_q(2, mu, {}, b) == BranchingOutcome::TypeMBorn;
  }
  CHECK(moran_trunc == 0);
  const double pm = moran / static_cast<double>(reps);
  const double pb = branching / static_cast<double>(reps);
  const double p = p_recursion(mu, 2);
  // difference of two independent binomial proportions, 99% level
  CHECK(std::abs(pm - pb) < 2.58 * std::sqrt(2.0 * p * (1 - p) / reps));
}
