#include "mwt/limits.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "mwt/error.hpp"
#include "mwt/special.hpp"

namespace mwt {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr int kQuadratureDepth = 40;

double two_pow_neg(int j) { return std::ldexp(1.0, -j); }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string copy(text);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    throw InvalidArgument("bad " + std::string(what) + " '" + copy + "' in law descriptor");
  }
  return value;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument("bad " + std::string(what) + " '" + std::string(text) +
                          "' in law descriptor");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Regime make_regime(RegimeKind kind, int j, std::optional<double> A, double n, double mu, int m,
                   double exponent) {
  const double ln_n = std::log(n);
  const double ln_mu = std::log(mu);
  double ln_scale = 0.0;
  switch (kind) {
    case RegimeKind::SmallMuGamma:
    case RegimeKind::Border:
      ln_scale = ln_mu;
      break;
    case RegimeKind::SmallMuExp:
      ln_scale = ln_n + (2.0 - two_pow_neg(m - 1)) * ln_mu;
      break;
    case RegimeKind::BigMuBorder:
      ln_scale = (1.0 - two_pow_neg(j)) * ln_mu;
      break;
    case RegimeKind::BigMuInterior: {
      const double k = m - j;
      ln_scale = ln_n / k + (1.0 + (1.0 - two_pow_neg(j)) / k) * ln_mu;
      break;
    }
    case RegimeKind::BigMuTop:
      ln_scale = ln_n / m + ln_mu;
      break;
  }
  return Regime{kind, j, A, std::exp(ln_scale), exponent};
}

}  // namespace

std::string_view to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::SmallMuGamma: return "SmallMuGamma";
    case RegimeKind::Border: return "Border";
    case RegimeKind::SmallMuExp: return "SmallMuExp";
    case RegimeKind::BigMuBorder: return "BigMuBorder";
    case RegimeKind::BigMuInterior: return "BigMuInterior";
    case RegimeKind::BigMuTop: return "BigMuTop";
  }
  return "?";
}

std::vector<RegimeBoundary> regime_boundaries(int m) {
  std::vector<RegimeBoundary> out;
  if (m < 2) return out;
  // Fixation-versus-tunnelling borders: mu ~ A N^{-2^{j-1} / (2^{j-1} - 1)}.
  for (int j = 2; j <= m; ++j) {
    const double p = std::ldexp(1.0, j - 1);
    out.push_back({-p / (p - 1.0), RegimeKind::Border, j});
  }
  // Deterministic-versus-stochastic borders: mu ~ A N^{-1 / (1 + (m-j-1) 2^{-j})}.
  for (int j = m - 1; j >= 1; --j) {
    out.push_back({-1.0 / (1.0 + (m - j - 1) * two_pow_neg(j)), RegimeKind::BigMuBorder, j});
  }
  return out;
}

Regime classify_regime(double n, double mu, int m, double band) {
  if (!(n >= 2.0) || !std::isfinite(n)) throw InvalidArgument("population size must be >= 2");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mutation rate must be positive");
  if (m < 1) throw InvalidArgument("number of mutations must be >= 1");
  if (!(band > 0.0 && band < 1.0)) throw InvalidArgument("border band must lie in (0, 1)");

  const double ln_n = std::log(n);
  const double ln_mu = std::log(mu);
  const double exponent = ln_mu / ln_n;

  if (m == 1) return make_regime(RegimeKind::SmallMuExp, 1, std::nullopt, n, mu, m, exponent);

  const auto boundaries = regime_boundaries(m);
  std::optional<RegimeBoundary> hit;
  for (const auto& b : boundaries) {
    const double ln_A = ln_mu - b.exponent * ln_n;
    if (std::abs(ln_A) > band) continue;
    if (hit) {
      throw Unclassifiable("mu lies within the border band of both " +
                           std::string(to_string(hit->kind)) + "(" + std::to_string(hit->j) +
                           ") and " + std::string(to_string(b.kind)) + "(" +
                           std::to_string(b.j) + "); reduce the band");
    }
    hit = b;
  }
  if (hit) {
    const double A = std::exp(ln_mu - hit->exponent * ln_n);
    return make_regime(hit->kind, hit->j, A, n, mu, m, exponent);
  }

  // Index of the first boundary above the exponent picks the open interval.
  const auto above = std::find_if(boundaries.begin(), boundaries.end(),
                                  [&](const RegimeBoundary& b) { return exponent < b.exponent; });
  const auto idx = static_cast<int>(above - boundaries.begin());
  if (idx == 0) return make_regime(RegimeKind::SmallMuGamma, 1, std::nullopt, n, mu, m, exponent);
  if (idx <= m - 2) {
    // Between Border(idx + 1) and Border(idx + 2).
    return make_regime(RegimeKind::SmallMuGamma, idx + 1, std::nullopt, n, mu, m, exponent);
  }
  if (idx == m - 1) return make_regime(RegimeKind::SmallMuExp, m, std::nullopt, n, mu, m, exponent);
  if (idx == static_cast<int>(boundaries.size())) {
    return make_regime(RegimeKind::BigMuTop, 0, std::nullopt, n, mu, m, exponent);
  }
  // Between BigMuBorder(j + 1) and BigMuBorder(j).
  const int j = above->j;
  return make_regime(RegimeKind::BigMuInterior, j, std::nullopt, n, mu, m, exponent);
}

// ---------------------------------------------------------------------------

double LimitLaw::cdf(double t) const {
  if (!(t > 0.0)) return 0.0;
  return std::visit(
      [t](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GammaLaw>) {
          return regularized_gamma_p(l.shape, t);
        } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
          return -std::expm1(-l.rate * t);
        } else if constexpr (std::is_same_v<L, HypoexpLaw>) {
          return hypoexp_gamma_cdf(l.shape, l.rate, t);
        } else if constexpr (std::is_same_v<L, PowerExpLaw>) {
          return -std::expm1(-std::pow(t, l.power) * inverse_factorial(l.power));
        } else {
          return 1.0 - bigmu_border_survival(l.A, l.m, l.j, t);
        }
      },
      law);
}

std::string LimitLaw::describe() const {
  return std::visit(
      [](const auto& l) -> std::string {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GammaLaw>) {
          return "gamma:" + std::to_string(l.shape);
        } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
          return "exp:" + format_double(l.rate);
        } else if constexpr (std::is_same_v<L, HypoexpLaw>) {
          return "hypoexp:" + std::to_string(l.shape) + ":" + format_double(l.rate);
        } else if constexpr (std::is_same_v<L, PowerExpLaw>) {
          return "powerexp:" + std::to_string(l.power);
        } else {
          return "quad:" + format_double(l.A) + ":" + std::to_string(l.m) + ":" +
                 std::to_string(l.j);
        }
      },
      law);
}

LimitLaw LimitLaw::parse(std::string_view descriptor) {
  const auto parts = split(descriptor, ':');
  const auto family = parts.front();
  auto expect = [&](std::size_t count) {
    if (parts.size() != count + 1) {
      throw InvalidArgument("law '" + std::string(family) + "' takes " + std::to_string(count) +
                            " parameter(s): " + std::string(descriptor));
    }
  };
  LimitLaw out;
  if (family == "gamma") {
    expect(1);
    out.law = GammaLaw{parse_int(parts[1], "shape")};
    if (std::get<GammaLaw>(out.law).shape < 1) throw InvalidArgument("gamma shape must be >= 1");
  } else if (family == "exp") {
    expect(1);
    out.law = ExponentialLaw{parse_number(parts[1], "rate")};
    if (!(std::get<ExponentialLaw>(out.law).rate > 0.0)) throw InvalidArgument("rate must be > 0");
  } else if (family == "hypoexp") {
    expect(2);
    out.law = HypoexpLaw{parse_int(parts[1], "shape"), parse_number(parts[2], "rate")};
    const auto& h = std::get<HypoexpLaw>(out.law);
    if (h.shape < 0 || !(h.rate > 0.0)) throw InvalidArgument("hypoexp needs shape >= 0, rate > 0");
  } else if (family == "powerexp") {
    expect(1);
    out.law = PowerExpLaw{parse_int(parts[1], "power")};
    if (std::get<PowerExpLaw>(out.law).power < 1) throw InvalidArgument("power must be >= 1");
  } else if (family == "quad") {
    expect(3);
    out.law = QuadratureLaw{parse_number(parts[1], "A"), parse_int(parts[2], "m"),
                            parse_int(parts[3], "j")};
    const auto& q = std::get<QuadratureLaw>(out.law);
    if (!(q.A > 0.0) || q.j < 1 || q.j > q.m - 1) {
      throw InvalidArgument("quad needs A > 0 and 1 <= j <= m - 1");
    }
  } else {
    throw InvalidArgument("unknown law family '" + std::string(family) + "'");
  }
  return out;
}

LimitLaw limit_law(const Regime& regime, int m) {
  const int j = regime.j;
  switch (regime.kind) {
    case RegimeKind::SmallMuGamma:
      return {GammaLaw{m - j}};
    case RegimeKind::SmallMuExp:
      return {ExponentialLaw{1.0}};
    case RegimeKind::Border: {
      const double rate = lambda_j(regime.A.value_or(1.0), j);
      if (m == j) return {ExponentialLaw{rate}};
      return {HypoexpLaw{m - j, rate}};
    }
    case RegimeKind::BigMuInterior:
      return {PowerExpLaw{m - j}};
    case RegimeKind::BigMuTop:
      return {PowerExpLaw{m}};
    case RegimeKind::BigMuBorder:
      return {QuadratureLaw{regime.A.value_or(1.0), m, j}};
  }
  throw InvalidArgument("unknown regime kind");
}

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

double lambda_j(double A, int j) {
  if (!(A > 0.0) || !std::isfinite(A)) throw InvalidArgument("A must be positive");
  if (j < 2) throw InvalidArgument("lambda_j needs j >= 2");

  const double B = std::pow(A, 2.0 * (1.0 - two_pow_neg(j - 1)));
  // Both series share the k = 1 term B; it is factored out of numerator and
  // denominator so tiny B cannot underflow.
  double num_term = 1.0;
  double den_term = 1.0;
  double num = 1.0;
  double den = 1.0;
  const double peak = std::sqrt(B);
  for (int k = 1; k < 1'000'000; ++k) {
    const double kd = k;
    num_term *= B / (kd * kd);
    den_term *= B / ((kd + 1.0) * kd);
    num += num_term;
    den += den_term;
    if (!std::isfinite(num) || !std::isfinite(den)) {
      throw OverflowGuard("lambda_j series overflowed for B = " + format_double(B));
    }
    // Only the ratio matters; rescale before the terms near sqrt(B) overflow.
    if (num > kRescaleAbove) {
      num *= kRescaleBy;
      den *= kRescaleBy;
      num_term *= kRescaleBy;
      den_term *= kRescaleBy;
    }
    if (kd + 1.0 > peak && num_term < 1e-15 * num && den_term < 1e-15 * den) return num / den;
  }
  throw OverflowGuard("lambda_j series did not converge for B = " + format_double(B));
}

double hypoexp_gamma_cdf(int k, double lambda, double t) {
  if (k < 0) throw InvalidArgument("gamma shape must be >= 0");
  if (!(lambda > 0.0)) throw InvalidArgument("exponential rate must be positive");
  if (!(t > 0.0)) return 0.0;
  if (k == 0) return -std::expm1(-lambda * t);
  const auto integrand = [&](double u) { return gamma_pdf(k, u) * -std::expm1(-lambda * (t - u)); };
  return adaptive_simpson(integrand, 0.0, t, kQuadratureTolerance, kQuadratureDepth);
}

double bigmu_border_survival(double A, int m, int j, double t) {
  if (!(A > 0.0)) throw InvalidArgument("A must be positive");
  if (j < 1 || j > m - 1) throw InvalidArgument("need 1 <= j <= m - 1");
  if (!(t > 0.0)) return 1.0;
  const int power = m - j - 1;
  const auto integrand = [&](double s) { return std::pow(t - s, power) * std::tanh(s); };
  const double integral = adaptive_simpson(integrand, 0.0, t, kQuadratureTolerance, kQuadratureDepth);
  const double scale = std::pow(A, 1.0 + power * two_pow_neg(j)) * inverse_factorial(power);
  return std::exp(-scale * integral);
}

double p_recursion(double mu, int j) {
  if (!(mu > 0.0)) throw InvalidArgument("mutation rate must be positive");
  if (j < 1) throw InvalidArgument("j must be >= 1");
  double p = 1.0;
  for (int i = 2; i <= j; ++i) {
    // (-mu + sqrt(mu^2 + 4 mu p)) / 2, rationalised to avoid cancellation.
    p = 2.0 * mu * p / (mu + std::sqrt(mu * mu + 4.0 * mu * p));
  }
  return p;
}

double q_asymptotic(double mu, int m) {
  if (!(mu > 0.0)) throw InvalidArgument("mutation rate must be positive");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  return std::pow(mu, 1.0 - two_pow_neg(m - 1));
}

PowerLawAsymptote small_t_asymptote(const Regime& regime, int m) {
  int power = 0;
  switch (regime.kind) {
    case RegimeKind::SmallMuGamma:
    case RegimeKind::BigMuInterior:
      power = m - regime.j;
      break;
    case RegimeKind::SmallMuExp:
      power = 1;
      break;
    case RegimeKind::BigMuTop:
      power = m;
      break;
    case RegimeKind::Border:
    case RegimeKind::BigMuBorder:
      throw UnsupportedRegime("no small-t power law is given for border regime " +
                              std::string(to_string(regime.kind)));
  }
  return PowerLawAsymptote{power, inverse_factorial(power), regime.timescale};
}

}  // namespace mwt
