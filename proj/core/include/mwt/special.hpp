#pragma once

#include <cmath>
#include <functional>

namespace mwt {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// `abs_tol`. Each interval is split at least `min_depth` times before the
/// error estimate is trusted, and never more than `max_depth` times.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int max_depth = 40, int min_depth = 4);

/// Regularized lower incomplete gamma function P(a, x) for a > 0, x >= 0.
/// Series below x = a + 1, Lentz continued fraction for Q above.
double regularized_gamma_p(double a, double x);

/// Density of the Gamma(k, 1) law at u >= 0, k >= 1.
double gamma_pdf(int k, double u);

/// 1 / k!
double inverse_factorial(int k);

}  // namespace mwt
