#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mwt/error.hpp"
#include "mwt/limits.hpp"

using namespace mwt;

namespace {

struct Fixture {
  double mu;
  RegimeKind kind;
  int j;
  bool border;
  double timescale;
  std::string law;
};

}  // namespace

TEST_CASE("the nine m = 3 regimes at N = 1e6") {
  const double N = 1e6;
  const std::vector<Fixture> table{
      {1e-14, RegimeKind::SmallMuGamma, 1, false, 1e-14, "gamma:2"},
      {1e-12, RegimeKind::Border, 2, true, 1e-12, "hypoexp:1:"},
      {1e-10, RegimeKind::SmallMuGamma, 2, false, 1e-10, "gamma:1"},
      {1e-8, RegimeKind::Border, 3, true, 1e-8, "exp:"},
      {1e-7, RegimeKind::SmallMuExp, 3, false, N * std::pow(1e-7, 7.0 / 4.0), "exp:1"},
      {1e-6, RegimeKind::BigMuBorder, 2, true, std::pow(1e-6, 3.0 / 4.0), "quad:"},
      {1e-5, RegimeKind::BigMuInterior, 1, false, std::sqrt(N) * std::pow(1e-5, 5.0 / 4.0),
       "powerexp:2"},
      {1e-4, RegimeKind::BigMuBorder, 1, true, std::sqrt(1e-4), "quad:"},
      {1e-2, RegimeKind::BigMuTop, 0, false, std::cbrt(N) * 1e-2, "powerexp:3"},
  };
  std::set<std::pair<int, int>> distinct;
  for (const auto& f : table) {
    CAPTURE(f.mu);
    const auto r = classify_regime(N, f.mu, 3);
    CHECK(r.kind == f.kind);
    CHECK(r.j == f.j);
    CHECK(r.is_border() == f.border);
    CHECK(r.A.has_value() == f.border);
    if (r.A) CHECK(*r.A == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.timescale == doctest::Approx(f.timescale).epsilon(1e-10));
    CHECK(r.exponent == doctest::Approx(std::log(f.mu) / std::log(N)));
    CHECK(limit_law(r, 3).describe().rfind(f.law, 0) == 0);
    distinct.insert({static_cast<int>(r.kind), r.j});
  }
  CHECK(distinct.size() == 9);

  const auto law2 = limit_law(classify_regime(N, 1e-12, 3), 3);
  REQUIRE(std::holds_alternative<HypoexpLaw>(law2.law));
  CHECK(std::get<HypoexpLaw>(law2.law).rate == doctest::Approx(lambda_j(1.0, 2)));
  const auto law8 = limit_law(classify_regime(N, 1e-4, 3), 3);
  REQUIRE(std::holds_alternative<QuadratureLaw>(law8.law));
  CHECK(std::get<QuadratureLaw>(law8.law).m == 3);
  CHECK(std::get<QuadratureLaw>(law8.law).j == 1);
}

TEST_CASE("far below every boundary is the slowest regime") {
  const auto r = classify_regime(1e6, 1e-20, 3);
  CHECK(r.kind == RegimeKind::SmallMuGamma);
  CHECK(r.j == 1);
  CHECK(limit_law(r, 3).describe() == "gamma:2");
}

TEST_CASE("border constant is mu / N^b") {
  const auto r = classify_regime(1e6, 1.1e-4, 3);
  REQUIRE(r.kind == RegimeKind::BigMuBorder);
  CHECK(*r.A == doctest::Approx(1.1));
  CHECK(r.timescale == doctest::Approx(std::sqrt(1.1e-4)));
  const auto b = classify_regime(200, 2.5e-5, 2);
  REQUIRE(b.kind == RegimeKind::Border);
  CHECK(b.j == 2);
  CHECK(*b.A == doctest::Approx(1.0));
}

TEST_CASE("regime count is 4m - 3") {
  const double N = 1e12;
  for (int m = 2; m <= 6; ++m) {
    std::set<std::pair<int, int>> distinct;
    for (double e = -3.0; e < -1e-3; e += 1e-3) {
      const auto r = classify_regime(N, std::pow(N, e), m);
      distinct.insert({static_cast<int>(r.kind), r.j});
    }
    CAPTURE(m);
    CHECK(distinct.size() == static_cast<std::size_t>(4 * m - 3));
  }
}

TEST_CASE("boundaries are ascending and 2m - 2 in number") {
  for (int m = 2; m <= 8; ++m) {
    const auto b = regime_boundaries(m);
    REQUIRE(b.size() == static_cast<std::size_t>(2 * m - 2));
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1].exponent < b[i].exponent);
    CHECK(b.front().exponent == doctest::Approx(-2.0));
    CHECK(b.back().exponent == doctest::Approx(-2.0 / m));
  }
}

TEST_CASE("m = 1 is the exact exponential law") {
  const auto r = classify_regime(100, 1e-2, 1);
  CHECK(r.kind == RegimeKind::SmallMuExp);
  CHECK(r.timescale == doctest::Approx(1.0));
  CHECK(limit_law(r, 1).describe() == "exp:1");
}

TEST_CASE("classifier errors") {
  CHECK_THROWS_AS(classify_regime(100, std::pow(100.0, -7.0 / 6.0), 3, 0.9),
                  Unclassifiable);
  CHECK_THROWS_AS(classify_regime(1, 1e-3, 2), InvalidArgument);
  CHECK_THROWS_AS(classify_regime(100, 0.0, 2), InvalidArgument);
  CHECK_THROWS_AS(classify_regime(100, 1e-3, 0), InvalidArgument);
  CHECK_THROWS_AS(classify_regime(100, 1e-3, 2, 0.0), InvalidArgument);
  CHECK_THROWS_AS(classify_regime(100, 1e-3, 2, 1.5), InvalidArgument);
}

TEST_CASE("regime names") {
  CHECK(to_string(RegimeKind::SmallMuGamma) == "SmallMuGamma");
  CHECK(to_string(RegimeKind::BigMuTop) == "BigMuTop");
}
