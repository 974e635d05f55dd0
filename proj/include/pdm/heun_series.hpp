#ifndef PDM_HEUN_SERIES_HPP
#define PDM_HEUN_SERIES_HPP

// Frobenius series for the biconfluent Heun form of the radial equation.
//
// With f(chi) = chi^{D1} exp(-(chi^2 + b chi)/2) F(chi) substituted into
//   f'' + (xi/sqrt(eps) - (alpha^2 - 1/4)/chi^2 + eta_s/chi - b chi - chi^2) f = 0
// the polynomial part satisfies
//   chi F'' + (2 D1 - b chi - 2 chi^2) F' + [(eta_s - b D1) + D3 chi] F = 0,
// and F = sum A_k chi^k obeys
//   (n+2)(n+1+2 D1) A_{n+2} = [b (n+1) - K] A_{n+1} + (2n - D3) A_n,   K = eta_s - b D1,
// with A_0 = 1 and A_1 = -K / (2 D1).

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "radial_model.hpp"

namespace pdm::heun {

/// `reference` flips the sign of the A_{n+1} term and of A_1. It does not
/// solve the transformed equation.
enum class Recurrence { derived, reference };

inline constexpr std::size_t default_terms = 80;
inline constexpr std::size_t max_terms = 400;
inline constexpr double tail_tolerance = 1e-12;

struct HeunSeries {
  std::vector<double> coeffs;
  ScaledSet scaled;
  Recurrence recurrence = Recurrence::derived;

  std::size_t n_terms() const { return coeffs.size(); }
};

struct TruncationDiagnostics {
  int n = 0;
  double delta3_residual = 0;  // D3 - 2n
  double a_next = 0;           // A_{n+1}
  bool is_polynomial = false;
};

/// Parameter list of the H_B(alpha, beta, gamma, delta; -chi) function for
/// the exponential-mass case, transcribed for export only.
struct BchCanonicalParams {
  double bch_alpha = 0;
  double bch_beta = 0;
  double bch_gamma = 0;
  double bch_delta = 0;
};

/// F, F', F'' at one point.
struct SeriesValue {
  double F = 0, dF = 0, d2F = 0;
  double tail_ratio = 0;
};

inline HeunSeries build_series(const ScaledSet& s, std::size_t n_terms = default_terms,
                               Recurrence rec = Recurrence::derived) {
  if (n_terms < 2) throw Error(ErrorKind::argument, "build_series: n_terms must be >= 2");
  const double d1 = s.delta1;
  const double d3 = s.delta3;
  const double b = s.b_tilde;
  const double K = s.constant_term();

  HeunSeries out;
  out.scaled = s;
  out.recurrence = rec;
  out.coeffs.resize(n_terms);
  auto& A = out.coeffs;
  A[0] = 1.0;
  A[1] = (rec == Recurrence::derived ? -K : K) / (2.0 * d1);
  for (std::size_t i = 0; i + 2 < n_terms; ++i) {
    const double n = static_cast<double>(i);
    const double denom = (n + 2.0) * (n + 1.0 + 2.0 * d1);
    double lead = b * (n + 1.0) - K;
    if (rec == Recurrence::reference) lead = -lead;
    A[i + 2] = (lead * A[i + 1] + (2.0 * n - d3) * A[i]) / denom;
    if (!std::isfinite(A[i + 2])) {
      throw Error(ErrorKind::series_divergence,
                  "series coefficient A_" + std::to_string(i + 2) + " is not finite");
    }
  }
  return out;
}

/// Sum F, F', F'' at chi. Reports the ratio of the last three terms to the
/// absolute term sum; `evaluate` rejects ratios above tail_tolerance.
inline SeriesValue sum_series(const HeunSeries& series, double chi) {
  const auto& A = series.coeffs;
  SeriesValue v;
  double scale = 0.0;
  double tail = 0.0;
  // p0 = chi^k, p1 = chi^{k-1}, p2 = chi^{k-2}
  double p0 = 1.0, p1 = 0.0, p2 = 0.0;
  const std::size_t n = A.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double term = A[k] * p0;
    v.F += term;
    v.dF += kk * A[k] * p1;
    v.d2F += kk * (kk - 1) * A[k] * p2;
    const double weight = std::fabs(term) * (1.0 + kk * kk);
    scale += weight;
    if (k + 3 >= n) tail += weight;
    p2 = (k == 0) ? 1.0 : p1;
    p1 = p0;
    p0 *= chi;
  }
  v.tail_ratio = scale > 0 ? tail / scale : 0.0;
  return v;
}

inline SeriesValue evaluate(const HeunSeries& series, double chi) {
  SeriesValue v = sum_series(series, chi);
  if (!(v.tail_ratio < tail_tolerance) || !std::isfinite(v.F)) {
    throw Error(ErrorKind::series_divergence,
                "series tail not converged at chi = " + detail::num(chi) + " with " +
                    std::to_string(series.n_terms()) + " terms");
  }
  return v;
}

/// Builds a series long enough that the tail at chi_max is negligible,
/// starting from default_terms and doubling up to max_terms.
inline HeunSeries build_series_for(const ScaledSet& s, double chi_max,
                                   Recurrence rec = Recurrence::derived) {
  std::size_t n = default_terms;
  while (true) {
    HeunSeries series = build_series(s, n, rec);
    if (sum_series(series, chi_max).tail_ratio < tail_tolerance || n >= max_terms) return series;
    n = std::min(max_terms, 2 * n);
  }
}

inline TruncationDiagnostics truncation_check(const ScaledSet& s, const HeunSeries& series, int n,
                                              double tol_delta = 1e-9, double tol_a = 1e-9) {
  if (n < 0 || static_cast<std::size_t>(n) + 1 >= series.n_terms()) {
    throw Error(ErrorKind::argument, "truncation_check: order outside the series length");
  }
  TruncationDiagnostics d;
  d.n = n;
  d.delta3_residual = s.delta3 - 2.0 * n;
  d.a_next = series.coeffs[static_cast<std::size_t>(n) + 1];
  d.is_polynomial = std::fabs(d.delta3_residual) <= tol_delta && std::fabs(d.a_next) <= tol_a;
  return d;
}

namespace detail {

// phi = D1 ln chi - (chi^2 + b chi)/2 and its derivatives.
struct Envelope {
  double value, d1, d2;
};

inline Envelope envelope(const ScaledSet& s, double chi) {
  const double D1 = s.delta1;
  const double b = s.b_tilde;
  return {std::pow(chi, D1) * std::exp(-0.5 * (chi * chi + b * chi)), D1 / chi - chi - 0.5 * b,
          -D1 / (chi * chi) - 1.0};
}

}  // namespace detail

/// f(chi) = chi^{D1} exp(-(chi^2 + b chi)/2) F(chi).
inline double assemble_f(double chi, const HeunSeries& series) {
  if (chi < 0) throw Error(ErrorKind::argument, "assemble_f: chi must be >= 0");
  if (chi == 0) return 0.0;
  const auto env = detail::envelope(series.scaled, chi);
  return env.value * evaluate(series, chi).F;
}

/// R(rho): rho^{-1/2} e^{-a rho/2} f(eps^{1/4} rho) for the exponential mass,
/// rho^{-3/2} f(eps^{1/4} rho) for the inverse-square mass.
inline double assemble_radial(double rho, const HeunSeries& series, const MassCase& mass,
                              const ReducedSet& r) {
  if (!(rho > 0)) throw Error(ErrorKind::argument, "assemble_radial: rho must be > 0");
  const double chi = std::pow(r.eps, 0.25) * rho;
  const double f = assemble_f(chi, series);
  if (mass.kind() == MassKind::exponential) {
    return f * std::exp(-0.5 * mass.a() * rho) / std::sqrt(rho);
  }
  return f / (rho * std::sqrt(rho));
}

/// max over the grid of |f'' + Q f| / (1 + |f| + |f''|), Q from the reduced
/// coefficients, with f'' computed analytically from the series.
inline double ode_residual(const HeunSeries& series, const ReducedSet& r,
                           std::span<const double> chi_grid) {
  if (chi_grid.empty()) throw Error(ErrorKind::argument, "ode_residual: empty grid");
  const double e4 = std::pow(r.eps, 0.25);
  const double e2 = std::sqrt(r.eps);
  double worst = 0.0;
  for (double chi : chi_grid) {
    if (!(chi > 0)) throw Error(ErrorKind::argument, "ode_residual: grid points must be > 0");
    const auto env = detail::envelope(series.scaled, chi);
    const auto v = evaluate(series, chi);
    const double f = env.value * v.F;
    const double f2 =
        env.value * (v.d2F + 2.0 * env.d1 * v.dF + (env.d2 + env.d1 * env.d1) * v.F);
    const double Q = r.xi / e2 - (r.alpha_sq - 0.25) / (chi * chi) + (r.c1 / e4) / chi -
                     (r.b1 / (e4 * e4 * e4)) * chi - chi * chi;
    const double res = std::fabs(f2 + Q * f) / (1.0 + std::fabs(f) + std::fabs(f2));
    worst = std::max(worst, res);
  }
  return worst;
}

/// A reduced set with eps = 1 whose scaling reproduces `s` (delta2 aside).
inline ReducedSet reduced_from_scaled(const ScaledSet& s) {
  ReducedSet r;
  r.alpha_sq = s.alpha * s.alpha;
  r.c1 = s.eta_s;
  r.b1 = s.b_tilde;
  r.eps = 1.0;
  r.xi = s.delta3 - 0.25 * s.b_tilde * s.b_tilde + 2.0 * s.delta1 + 1.0;
  return r;
}

/// H_B argument list for the exponential-mass wave function at energy E.
inline BchCanonicalParams bch_canonical_params(double E, const SystemParams& s) {
  if (s.mass.kind() != MassKind::exponential) {
    throw Error(ErrorKind::invalid_parameter, "H_B parameters are defined for the exponential mass");
  }
  const auto& k = s.constants;
  const auto& p = s.potential;
  const double eta5 = eta_exponential(E, p, s.mass.a(), s.fields, s.quantum, k).eta5;
  const double eps = -eta5;
  if (!(eps > 0)) throw Error(ErrorKind::scaling, "eps = " + pdm::detail::num(eps) + " <= 0");
  const double delta = effective_delta(s);
  const double g = 2.0 * k.m0 / k.hbar2();
  const double lam = p.lambda;
  const double shift = g * lam * (-E + 2 * p.V1 + 3 * p.V2 + 0.5 * lam * p.V3);
  BchCanonicalParams out;
  out.bch_alpha = delta;
  out.bch_beta = shift / std::pow(eps, 0.75);
  out.bch_gamma = -k.cyclotron(s.fields.B) * delta + g * (E - p.V1 - p.V2 + lam * p.V3) -
                  0.25 * lam * lam + shift * shift / (4.0 * std::pow(eps, 1.5));
  out.bch_delta = (-2.0 * g * p.V3 - lam) / std::pow(eps, 0.25);
  return out;
}

}  // namespace pdm::heun

#endif  // PDM_HEUN_SERIES_HPP
