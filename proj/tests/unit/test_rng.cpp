#include <doctest.h>

#include <cstdint>
#include <unordered_set>

#include "mwt/harness.hpp"
#include "mwt/rng.hpp"

using namespace mwt;

TEST_CASE("same seed gives the same stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a() == b();
  CHECK(equal == 0);
}

TEST_CASE("uniform ranges") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = rng.uniform_pos();
    REQUIRE(v > 0.0);
    REQUIRE(v <= 1.0);
    sum += u;
  }
  // sd of the mean is 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("exponential mean") {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(4.0);
  CHECK(std::abs(sum / n - 0.25) < 4.0 * 0.25 / std::sqrt(n));
}

TEST_CASE("seed_for_replicate is stable and distinct in index") {
  CHECK(seed_for_replicate(5, 0) != seed_for_replicate(5, 1));
  CHECK(seed_for_replicate(5, 17) == seed_for_replicate(5, 17));
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100000; ++i) seen.insert(seed_for_replicate(99, i));
  CHECK(seen.size() == 100000);
}

TEST_CASE("distinct bases give distinct index-0 seeds") {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t b = 0; b < 100000; ++b) seen.insert(seed_for_replicate(b, 0));
  CHECK(seen.size() == 100000);
}
