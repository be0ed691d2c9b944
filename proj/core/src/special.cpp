#include "mwt/special.hpp"

#include <limits>

#include "mwt/error.hpp"

namespace mwt {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double eps, int depth,
              int forced) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || (forced <= 0 && std::abs(delta) <= 15.0 * eps)) {
    return left + right + delta / 15.0;
  }
  return refine(f, Panel{p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * eps, depth - 1, forced - 1) +
         refine(f, Panel{p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * eps, depth - 1, forced - 1);
}

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-16;

double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized Q(a, x) by modified Lentz.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth, int min_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  return refine(f, Panel{a, fa, m, fm, b, fb, simpson(a, fa, fm, b, fb)}, abs_tol, max_depth,
                min_depth);
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double gamma_pdf(int k, double u) {
  if (u < 0.0) return 0.0;
  if (u == 0.0) return k == 1 ? 1.0 : 0.0;
  return std::exp((k - 1) * std::log(u) - u - std::lgamma(static_cast<double>(k)));
}

double inverse_factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r /= i;
  return r;
}

}  // namespace mwt
