#pragma once

#include <cmath>
#include <stdexcept>

namespace spectomo {

namespace detail {

/// Continued-fraction kernel of the regularized incomplete beta function
/// (modified Lentz iteration).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int max_iter = 500;
  constexpr double eps = 1e-15;
  constexpr double tiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("incomplete_beta: shape parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// CDF of the F distribution with d1 and d2 degrees of freedom.
inline double f_cdf(double x, double d1, double d2) {
  if (d1 < 1.0 || d2 < 1.0)
    throw std::invalid_argument("f_cdf: degrees of freedom must be >= 1");
  if (x < 0.0)
    throw std::invalid_argument("f_cdf: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double z = d1 * x / (d1 * x + d2);
  return incomplete_beta(d1 / 2.0, d2 / 2.0, z);
}

/// CDF of Student's t distribution with dof degrees of freedom.
inline double student_t_cdf(double t, double dof) {
  if (dof < 1.0)
    throw std::invalid_argument("student_t_cdf: dof must be >= 1");
  const double x = dof / (dof + t * t);
  const double half_tail = 0.5 * incomplete_beta(dof / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

}  // namespace spectomo
