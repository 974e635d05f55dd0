#ifndef PDM_SPECIAL_FUNCTIONS_HPP
#define PDM_SPECIAL_FUNCTIONS_HPP

// Real-argument erf, erfi and the Dawson integral.
//
// All three are evaluated on |x| and the sign restored afterwards, so odd
// symmetry is exact. Small arguments use positive-term Maclaurin forms
// (no cancellation); large arguments use the erfc continued fraction or the
// Dawson asymptotic series.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace pdm::special {

struct SpecialFnResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

/// e^{x^2} overflows double precision just above 26.6.
inline constexpr double erfi_overflow_guard = 26.0;

/// Below this |x| erf uses the Kummer-type series, above it the continued fraction.
inline constexpr double erf_series_limit = 3.5;

/// Below this |x| erfi/Dawson use the Maclaurin series of the integral of
/// e^{t^2}; above it the Dawson asymptotic series is already at full precision.
inline constexpr double dawson_series_limit = 8.0;

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::domain, std::string(name) + ": argument must be finite");
  }
}

// int_0^x e^{t^2} dt = sum_k x^{2k+1} / (k! (2k+1)), x >= 0. All terms positive.
inline double exp_sq_integral_series(double x, int* terms = nullptr) {
  const double x2 = x * x;
  double power = x;  // x^{2k+1} / k!
  double sum = x;
  int k = 1;
  for (; k < 4000; ++k) {
    power *= x2 / k;
    const double term = power / (2 * k + 1);
    sum += term;
    if (k > x2 && term <= sum * 0.25 * eps) break;
  }
  if (terms) *terms = k;
  return sum;
}

// sqrt(pi)/2 * e^{x^2} * erf(x) = sum_k 2^k x^{2k+1} / (2k+1)!!, x >= 0.
inline double erf_kummer_series(double x) {
  const double two_x2 = 2.0 * x * x;
  double term = x;
  double sum = x;
  for (int k = 1; k < 4000; ++k) {
    term *= two_x2 / (2 * k + 1);
    sum += term;
    if (2 * k + 1 > two_x2 && term <= sum * 0.25 * eps) break;
  }
  return sum;
}

// erfc(x) for x >= erf_series_limit by the Laplace continued fraction
// erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz algorithm.
inline double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int j = 1; j < 5000; ++j) {
    const double a = 0.5 * j;
    d = x + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 0.5 * eps) break;
  }
  return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

// Dawson F(x) for x >= dawson_series_limit:
// F(x) ~ 1/(2x) sum_k (2k-1)!! / (2x^2)^k.
inline double dawson_asymptotic(double x) {
  const double inv_two_x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    const double next = term * (2 * k - 1) * inv_two_x2;
    if (next > term) break;  // past the smallest term of the asymptotic series
    term = next;
    sum += term;
    if (term <= sum * 0.25 * eps) break;
  }
  return sum / (2.0 * x);
}

inline double apply_sign(double x, double magnitude) { return x < 0 ? -magnitude : magnitude; }

}  // namespace detail

/// (2/sqrt(pi)) int_0^x e^{-t^2} dt.
inline SpecialFnResult erf(double x) {
  detail::require_finite(x, "erf");
  const double ax = std::fabs(x);
  double v;
  if (ax == 0.0) {
    return {x, 0.0};
  } else if (ax < erf_series_limit) {
    v = detail::two_over_sqrt_pi * std::exp(-ax * ax) * detail::erf_kummer_series(ax);
  } else {
    v = 1.0 - detail::erfc_continued_fraction(ax);
  }
  return {detail::apply_sign(x, v), 8.0 * detail::eps * v};
}

/// Imaginary error function as the real integral (2/sqrt(pi)) int_0^x e^{t^2} dt.
/// The absolute error estimate scales with the value: it is relative in nature
/// once erfi exceeds one.
inline SpecialFnResult erfi(double x) {
  detail::require_finite(x, "erfi");
  const double ax = std::fabs(x);
  if (ax > erfi_overflow_guard) {
    throw Error(ErrorKind::range, "erfi: |x| = " + std::to_string(ax) +
                                      " exceeds the overflow guard |x| <= 26");
  }
  if (ax == 0.0) return {x, 0.0};
  double v;
  double rel;
  if (ax < dawson_series_limit) {
    int terms = 0;
    v = detail::two_over_sqrt_pi * detail::exp_sq_integral_series(ax, &terms);
    rel = (8.0 + std::sqrt(static_cast<double>(terms))) * detail::eps;
  } else {
    v = detail::two_over_sqrt_pi * std::exp(ax * ax) * detail::dawson_asymptotic(ax);
    rel = (8.0 + 2.0 * ax * ax) * detail::eps;
  }
  return {detail::apply_sign(x, v), rel * v};
}

/// Dawson integral F(x) = e^{-x^2} int_0^x e^{t^2} dt.
inline SpecialFnResult dawson(double x) {
  detail::require_finite(x, "dawson");
  const double ax = std::fabs(x);
  if (ax == 0.0) return {x, 0.0};
  double v;
  double rel;
  if (ax < dawson_series_limit) {
    int terms = 0;
    v = std::exp(-ax * ax) * detail::exp_sq_integral_series(ax, &terms);
    rel = (8.0 + std::sqrt(static_cast<double>(terms)) + 2.0 * ax * ax) * detail::eps;
  } else {
    v = detail::dawson_asymptotic(ax);
    rel = 8.0 * detail::eps;
  }
  return {detail::apply_sign(x, v), rel * v};
}

}  // namespace pdm::special

#endif  // PDM_SPECIAL_FUNCTIONS_HPP
