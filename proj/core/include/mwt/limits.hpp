#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mwt {

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

/// The asymptotic regimes of (N, mu) for a fixed number of mutations m,
/// ordered from the slowest mutation rates to the fastest.
///
///   SmallMuGamma(j)   j = 1..m-1   mu * tau -> Gamma(m - j)
///   Border(j, A)      j = 2..m     mu * tau -> Gamma(m - j) + Exp(lambda_j(A))
///   SmallMuExp        (j = m)      N mu^{2 - 2^{-(m-1)}} tau -> Exp(1)
///   BigMuBorder(j, A) j = 1..m-1   P(mu^{1 - 2^{-j}} tau > t) -> integral law
///   BigMuInterior(j)  j = 1..m-2   P(c tau > t) -> exp(-t^{m-j} / (m-j)!)
///   BigMuTop          (j = 0)      P(N^{1/m} mu tau > t) -> exp(-t^m / m!)
enum class RegimeKind { SmallMuGamma, Border, SmallMuExp, BigMuBorder, BigMuInterior, BigMuTop };

std::string_view to_string(RegimeKind kind);

struct Regime {
  RegimeKind kind = RegimeKind::SmallMuGamma;
  int j = 1;
  std::optional<double> A;  // border regimes only
  double timescale = 1.0;   // c(N, mu) such that c * tau_m converges
  double exponent = 0.0;    // ln(mu) / ln(N)

  bool is_border() const noexcept {
    return kind == RegimeKind::Border || kind == RegimeKind::BigMuBorder;
  }
};

/// A border between two open regimes: mu ~ A N^{exponent}.
struct RegimeBoundary {
  double exponent;
  RegimeKind kind;  // Border or BigMuBorder
  int j;
};

/// The 2m - 2 boundary exponents for m >= 2, ascending.
std::vector<RegimeBoundary> regime_boundaries(int m);

inline constexpr double kDefaultBorderBand = 0.25;

/// Classifies finite (n, mu, m). mu is treated as a border case of boundary
/// b when |ln(mu / n^b)| <= band, with A = mu / n^b; otherwise the regime is
/// the open interval containing ln(mu) / ln(n). For m = 1 the exact law
/// N mu tau_1 ~ Exp(1) is reported as SmallMuExp.
/// Throws Unclassifiable if mu falls inside the band of two boundaries.
Regime classify_regime(double n, double mu, int m, double band = kDefaultBorderBand);

// ---------------------------------------------------------------------------
// Limit laws
// ---------------------------------------------------------------------------

struct GammaLaw {
  int shape;
};
struct ExponentialLaw {
  double rate;
};
/// Gamma(shape, 1) + independent Exp(rate).
struct HypoexpLaw {
  int shape;
  double rate;
};
/// cdf 1 - exp(-t^power / power!).
struct PowerExpLaw {
  int power;
};
/// cdf 1 - bigmu_border_survival(A, m, j, t).
struct QuadratureLaw {
  double A;
  int m;
  int j;
};

struct LimitLaw {
  std::variant<GammaLaw, ExponentialLaw, HypoexpLaw, PowerExpLaw, QuadratureLaw> law;

  double cdf(double t) const;
  /// Round-trippable descriptor, e.g. "gamma:2", "hypoexp:1:1.433".
  std::string describe() const;
  static LimitLaw parse(std::string_view descriptor);
};

LimitLaw limit_law(const Regime& regime, int m);

/// Rate of the extra exponential in the border law Gamma(m - j) + Exp(lambda_j):
/// a ratio of two power series in B = A^{2(1 - 2^{-(j-1)})}.
double lambda_j(double A, int j);

/// P(S_k + Y <= t), S_k ~ Gamma(k, 1), Y ~ Exp(lambda), by adaptive quadrature.
double hypoexp_gamma_cdf(int k, double lambda, double t);

/// P(limit > t) for the rapid-mutation border law
///   exp(-(A^{1+(m-j-1)2^{-j}} / (m-j-1)!) * int_0^t (t-s)^{m-j-1} tanh(s) ds).
double bigmu_border_survival(double A, int m, int j, double t);

/// Probability that a critical branching family started by one mutant
/// eventually produces a j-fold mutant: p_1 = 1, p_j = positive root of
/// p^2 + mu p - mu p_{j-1} = 0.
double p_recursion(double mu, int j);

/// mu^{1 - 2^{-(m-1)}}, the leading-order value of p_recursion(mu, m).
double q_asymptotic(double mu, int m);

// ---------------------------------------------------------------------------
// Small-t behaviour
// ---------------------------------------------------------------------------

struct PowerLawAsymptote {
  int power;
  double coefficient;  // 1 / power!
  double timescale;
};

/// Leading term of P(c tau_m <= t) as t -> 0. Throws UnsupportedRegime for
/// the border regimes.
PowerLawAsymptote small_t_asymptote(const Regime& regime, int m);

}  // namespace mwt
