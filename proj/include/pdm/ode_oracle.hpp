#ifndef PDM_ODE_ORACLE_HPP
#define PDM_ODE_ORACLE_HPP

// Shooting eigensolver for radial equations of the form
//
//   R'' + (p_inv/rho + p_const) R' + q(E, rho) R = 0,
//
// independent of the series/closed-form machinery. The regular solution is
// started at rho_min from its Frobenius expansion rho^s (1 + c1 rho), the
// decaying one at rho_max from the WKB log-derivative, both are integrated
// with an adaptive Dormand-Prince 5(4) scheme to a match point, and the
// normalized Wronskian of the two is the mismatch. Its zeros are the
// eigenvalues; its sign does not depend on the match point.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "radial_model.hpp"
#include "root_finding.hpp"
#include "spectra.hpp"

namespace pdm::oracle {

/// Coefficients of 1/rho^2 and 1/rho in q(E, rho) near the origin.
struct OriginBehavior {
  double eta2 = 0;
  double eta3 = 0;
};

struct RadialProblem {
  std::string label;
  double p_inv = 1.0;
  double p_const = 0.0;
  std::function<double(double E, double rho)> q;
  std::function<OriginBehavior(double E)> origin;
  double rho_min = 1e-6;
  double rho_max = 40.0;
  std::optional<double> match_point;  // automatic (outer turning point) when empty
  double rel_tol = 1e-10;
  /// WKB decay exponent required between the turning point and rho_max.
  double tail_action = 60.0;
  /// Shorten rho_max to where tail_action is reached; off = integrate from rho_max as given.
  bool trim_rho_max = true;
};

struct ShootResult {
  double E = 0;
  double mismatch = 0;
  int node_count = 0;
  double match_point = 0;
  double rho_max = 0;
};

/// Expanded: the polynomial-coefficient equations the closed forms are built
/// on. Full: the radial equation with the exact exponentials and mass.
enum class OdeForm { expanded, full };

/// Indicial exponent s of R ~ rho^s: s(s-1) + p_inv s + eta2 = 0, larger root.
inline double indicial_exponent(double p_inv, double eta2) {
  const double b = 1.0 - p_inv;
  const double disc = b * b - 4.0 * eta2;
  if (disc < 0) {
    throw Error(ErrorKind::evanescent_origin,
                "indicial exponent is complex (discriminant " + csv::num(disc) + ")");
  }
  return 0.5 * (b + std::sqrt(disc));
}

inline RadialProblem make_problem(const SystemParams& s, OdeForm form = OdeForm::expanded) {
  s.validate();
  RadialProblem prob;
  const bool exp_case = s.mass.kind() == MassKind::exponential;
  prob.label = std::string(to_string(s.mass.kind())) +
               (form == OdeForm::expanded ? " (expanded)" : " (full)");
  prob.p_inv = exp_case ? 1.0 : 3.0;
  prob.p_const = exp_case ? s.mass.a() : 0.0;

  if (form == OdeForm::expanded) {
    prob.q = [s](double E, double rho) {
      const EtaSet e = eta_for(E, s);
      return e.eta1 + e.eta2 / (rho * rho) + e.eta3 / rho + e.eta4 * rho + e.eta5 * rho * rho;
    };
    prob.origin = [s](double E) {
      const EtaSet e = eta_for(E, s);
      return OriginBehavior{e.eta2, e.eta3};
    };
    return prob;
  }

  if (!exp_case && s.potential.V3 != 0.0) {
    throw Error(ErrorKind::invalid_parameter, "inverse-square case assumes V3 = 0");
  }
  prob.q = [s](double E, double rho) {
    const auto& k = s.constants;
    const auto& p = s.potential;
    const double w = k.cyclotron(s.fields.B);
    const double delta = effective_delta(s);
    const double V = p.V1 * std::exp(-p.lambda * rho) + p.V2 * std::exp(-2 * p.lambda * rho) +
                     p.V3 / rho;
    return -w * delta - delta * delta / (rho * rho) - 0.25 * w * w * rho * rho +
           2.0 * s.mass.mass(rho, k.m0) / k.hbar2() * (E - V);
  };
  prob.origin = [s](double E) {
    const auto& k = s.constants;
    const auto& p = s.potential;
    const double delta = effective_delta(s);
    if (s.mass.kind() == MassKind::exponential) {
      return OriginBehavior{-delta * delta, -2.0 * k.m0 * p.V3 / k.hbar2()};
    }
    const double a = s.mass.a();
    return OriginBehavior{-delta * delta + 2 * a * (E - p.V1 - p.V2) / k.hbar2(),
                          2 * a * p.lambda * (p.V1 + 2 * p.V2) / k.hbar2()};
  };
  return prob;
}

/// 2D isotropic oscillator R'' + R'/rho + (2E - delta^2/rho^2 - omega^2 rho^2) R = 0,
/// eigenvalues (2k + |delta| + 1) omega.
inline RadialProblem calibration_oscillator(double delta, double omega) {
  RadialProblem prob;
  prob.label = "calibration oscillator";
  prob.p_inv = 1.0;
  prob.p_const = 0.0;
  prob.q = [delta, omega](double E, double rho) {
    return 2.0 * E - delta * delta / (rho * rho) - omega * omega * rho * rho;
  };
  prob.origin = [delta](double) { return OriginBehavior{-delta * delta, 0.0}; };
  return prob;
}

namespace detail {

using State = std::array<double, 2>;

struct Integration {
  State y;
  int sign_changes = 0;
};

// Q of the normal form u'' + Q u = 0 after removing the first-derivative term.
inline double q_eff(const RadialProblem& prob, double E, double rho) {
  const double p = prob.p_inv / rho + prob.p_const;
  const double dp = -prob.p_inv / (rho * rho);
  return prob.q(E, rho) - 0.5 * dp - 0.25 * p * p;
}

// Adaptive Dormand-Prince 5(4) from r0 to r1 (either direction) on
// y = (R, R'). The state is renormalized when it grows large; sign changes of
// R between accepted steps are counted.
inline Integration integrate(const RadialProblem& prob, double E, State y, double r0, double r1) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto rhs = [&](double r, const State& s) -> State {
    const double p = prob.p_inv / r + prob.p_const;
    return {s[1], -p * s[1] - prob.q(E, r) * s[0]};
  };
  auto axpy = [](const State& y0, double h, std::initializer_list<std::pair<double, const State*>> ks) {
    State out = y0;
    for (const auto& [c, k] : ks) {
      out[0] += h * c * (*k)[0];
      out[1] += h * c * (*k)[1];
    }
    return out;
  };

  Integration res;
  const double dir = r1 > r0 ? 1.0 : -1.0;
  double r = r0;
  double h = dir * std::max(1e-3 * std::fabs(r0), 1e-10);
  State k1 = rhs(r, y);
  int steps = 0;
  while (dir * (r1 - r) > 0) {
    if (++steps > 5'000'000) {
      throw Error(ErrorKind::integration, "step budget exhausted near rho = " + csv::num(r));
    }
    // Resolve oscillations so that nodes are not stepped over.
    const double Q = q_eff(prob, E, r);
    double h_cap = std::max(0.25 * std::fabs(r), 1e-3);
    if (Q > 0) h_cap = std::min(h_cap, 0.5 / std::sqrt(Q));
    if (std::fabs(h) > h_cap) h = dir * h_cap;
    if (dir * (r + h - r1) > 0) h = r1 - r;

    const State k2 = rhs(r + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(r + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(r + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(r + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        rhs(r + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(r + h, y_new);
    State err;
    for (int i = 0; i < 2; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    // Component scales share a floor tied to the state norm, so a node of R
    // does not force tiny steps.
    const double ell = std::fabs(r + h);
    const double norm = std::max({std::fabs(y[0]), std::fabs(y_new[0]), ell * std::fabs(y[1]),
                                  ell * std::fabs(y_new[1])});
    const double sc0 = prob.rel_tol * (std::max(std::fabs(y[0]), std::fabs(y_new[0])) + 1e-3 * norm);
    const double sc1 =
        prob.rel_tol * (std::max(std::fabs(y[1]), std::fabs(y_new[1])) + 1e-3 * norm / ell);
    const double en = std::max(std::fabs(err[0]) / sc0, std::fabs(err[1]) / sc1);
    if (!std::isfinite(en)) {
      h *= 0.25;
    } else if (en <= 1.0) {
      if (std::signbit(y_new[0]) != std::signbit(y[0]) && y[0] != 0.0) ++res.sign_changes;
      r += h;
      y = y_new;
      k1 = k7;
      const double mag = std::max(std::fabs(y[0]), std::fabs(y[1]));
      if (mag > 1e100 || (mag < 1e-100 && mag > 0)) {
        const double s = 1.0 / mag;
        y[0] *= s;
        y[1] *= s;
        k1[0] *= s;
        k1[1] *= s;
      }
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(en, -0.25));
    }
    if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(r))) {
      throw Error(ErrorKind::integration, "step size underflow near rho = " + csv::num(r));
    }
  }
  res.y = y;
  return res;
}

struct Geometry {
  double match;
  double rho_max;
};

// Outer turning point of q_eff as match point and a rho_max beyond which the
// WKB decay exponent exceeds tail_action.
inline Geometry geometry(const RadialProblem& prob, double E) {
  const double lo = std::max(prob.rho_min * 10.0, 1e-4);
  double R = prob.rho_max;
  for (int grow = 0; grow < 7 && q_eff(prob, E, R) >= 0; ++grow) R *= 2.0;
  if (q_eff(prob, E, R) >= 0) {
    throw Error(ErrorKind::integration,
                "no confinement at E = " + csv::num(E) + ": q_eff >= 0 at rho = " + csv::num(R));
  }
  constexpr int N = 4000;
  auto grid = [&](int i, double top) { return lo + (top - lo) * i / N; };

  // Largest grid point with q_eff >= 0, else the maximum of q_eff.
  std::optional<double> turning;
  double best_rho = lo;
  double best_q = -INFINITY;
  for (int i = N; i >= 0; --i) {
    const double rho = grid(i, R);
    const double Q = q_eff(prob, E, rho);
    if (Q >= 0) {
      turning = rho;
      break;
    }
    if (Q > best_q) {
      best_q = Q;
      best_rho = rho;
    }
  }
  double match = turning.value_or(best_rho);
  if (turning && *turning < R) {
    // refine the sign change between turning and the next grid point outward
    double a = *turning, b = std::min(R, *turning + (R - lo) / N);
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      (q_eff(prob, E, m) >= 0 ? a : b) = m;
    }
    match = a;
  }
  if (prob.match_point) match = *prob.match_point;

  double rho_max = R;
  if (prob.trim_rho_max) {
    // accumulate int sqrt(-q_eff) outward from the match point
    double action = 0.0;
    double rho = match;
    const double step = std::max(1e-3, (R - match) / N);
    double top = R;
    bool reached = false;
    for (int ext = 0; ext < 4 && !reached; ++ext) {
      while (rho < top) {
        const double Q = q_eff(prob, E, rho + 0.5 * step);
        if (Q < 0) action += std::sqrt(-Q) * step;
        rho += step;
        if (action >= prob.tail_action) {
          reached = true;
          break;
        }
      }
      if (!reached) top *= 2.0;
    }
    rho_max = rho;
  }
  match = std::clamp(match, lo, 0.5 * rho_max);
  return {match, rho_max};
}

}  // namespace detail

inline ShootResult shoot(const RadialProblem& prob, double E) {
  if (!(prob.rho_min > 0 && prob.rho_min < prob.rho_max)) {
    throw Error(ErrorKind::argument, "shoot requires 0 < rho_min < rho_max");
  }
  const OriginBehavior ob = prob.origin(E);
  const double s = indicial_exponent(prob.p_inv, ob.eta2);
  const auto geo = detail::geometry(prob, E);

  // outward, scaled by rho^{-s}
  const double denom = 2.0 * s + prob.p_inv;
  const double c1 = denom != 0.0 ? -(prob.p_const * s + ob.eta3) / denom : 0.0;
  const double r0 = prob.rho_min;
  detail::State y_out{1.0 + c1 * r0, s * (1.0 + c1 * r0) / r0 + c1};
  const auto out = detail::integrate(prob, E, y_out, r0, geo.match);

  // inward from the decaying WKB branch
  const double Q = detail::q_eff(prob, E, geo.rho_max);
  const double p = prob.p_inv / geo.rho_max + prob.p_const;
  detail::State y_in{1.0, -std::sqrt(std::max(0.0, -Q)) - 0.5 * p};
  const auto in = detail::integrate(prob, E, y_in, geo.rho_max, geo.match);

  const double L = geo.match;
  const double no = std::hypot(out.y[0], L * out.y[1]);
  const double ni = std::hypot(in.y[0], L * in.y[1]);
  ShootResult res;
  res.E = E;
  res.mismatch = L * (out.y[0] * in.y[1] - in.y[0] * out.y[1]) / (no * ni);
  res.node_count = out.sign_changes + in.sign_changes;
  res.match_point = geo.match;
  res.rho_max = geo.rho_max;
  return res;
}

/// Eigenvalues in [lo, hi] from sign changes of the mismatch, refined to
/// |dE| <= 1e-9. Points where shooting is undefined break brackets.
inline std::vector<spectra::EnergyLevel> find_bound_states(const RadialProblem& prob, double lo,
                                                           double hi, int max_states,
                                                           int n_grid = 200, int m = 0) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw Error(ErrorKind::argument, "find_bound_states requires a finite window lo < hi");
  }
  auto f = [&](double E) -> std::optional<double> {
    try {
      return shoot(prob, E).mismatch;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  roots::BisectionTolerance tol;
  tol.x_rel = 0.0;
  tol.x_abs = 1e-9;
  tol.residual = INFINITY;
  auto found = roots::scan_roots(f, lo, hi, n_grid, tol).roots;
  // Levels squeezed between a grid point and the edge of the region where
  // shooting is defined (e.g. where the origin exponent turns complex).
  const double dx = (hi - lo) / n_grid;
  for (int i = 0; i < n_grid; ++i) {
    const double x0 = lo + dx * i, x1 = i + 1 == n_grid ? hi : lo + dx * (i + 1);
    const auto y0 = f(x0), y1 = f(x1);
    if (y0.has_value() == y1.has_value()) continue;
    double in = y0 ? x0 : x1, out = y0 ? x1 : x0;
    const double y_in = y0 ? *y0 : *y1;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (in + out);
      (f(mid) ? in : out) = mid;
    }
    const auto y_edge = f(in);
    const double x_def = y0 ? x0 : x1;
    if (!y_edge || in == x_def || std::signbit(*y_edge) == std::signbit(y_in)) continue;
    found.push_back(x_def < in ? roots::bisect(f, x_def, in, y_in, tol)
                               : roots::bisect(f, in, x_def, *y_edge, tol));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  std::vector<spectra::EnergyLevel> levels;
  for (const auto& r : found) {
    if (static_cast<int>(levels.size()) >= max_states) break;
    // a genuine zero of the Wronskian, not a jump
    if (!(std::fabs(r.residual) < 1e-4)) continue;
    spectra::EnergyLevel lvl;
    lvl.E = r.x;
    lvl.m = m;
    lvl.residual = r.residual;
    lvl.method = spectra::Method::oracle;
    lvl.bracket = r.bracket;
    lvl.iterations = r.iterations;
    try {
      lvl.nodes = shoot(prob, r.x).node_count;
      lvl.n = *lvl.nodes;
    } catch (const Error&) {
    }
    levels.push_back(lvl);
  }
  return levels;
}

// --- comparison against the closed forms --------------------------------------

enum class FormulaKind { exponential_condition, inverse_square_closed_form, derived_condition };

inline std::string_view to_string(FormulaKind k) {
  switch (k) {
    case FormulaKind::exponential_condition: return "exponential-condition";
    case FormulaKind::inverse_square_closed_form: return "inverse-square-closed-form";
    case FormulaKind::derived_condition: return "derived-condition";
  }
  return "?";
}

struct ComparisonRow {
  int index = 0;
  int n_formula = 0;
  double E_oracle = 0;
  double E_formula = 0;
  double abs_gap = 0;
  double rel_gap = 0;
  int oracle_nodes = -1;
};

struct ComparisonReport {
  FormulaKind which = FormulaKind::exponential_condition;
  std::vector<spectra::EnergyLevel> oracle_levels;
  std::vector<spectra::EnergyLevel> formula_levels;
  std::vector<ComparisonRow> rows;
  std::vector<std::string> notes;
};

struct ComparisonSettings {
  double E_lo = -20.0;
  double E_hi = 20.0;
  int max_states = 4;
  int oracle_grid = 200;
  spectra::ScanWindow formula_window{};
  OdeForm form = OdeForm::expanded;
};

/// Pairs oracle eigenvalues with formula levels (n = 0, 1, ...) by ascending
/// order. Reports gaps; never asserts agreement.
inline ComparisonReport compare_with_closed_form(const SystemParams& s, FormulaKind which,
                                                 const ComparisonSettings& cfg = {}) {
  ComparisonReport rep;
  rep.which = which;
  const auto prob = make_problem(s, cfg.form);
  rep.oracle_levels =
      find_bound_states(prob, cfg.E_lo, cfg.E_hi, cfg.max_states, cfg.oracle_grid, s.quantum.m);
  if (rep.oracle_levels.empty()) rep.notes.push_back("oracle found no bound state in the window");

  for (int n = 0; n < cfg.max_states; ++n) {
    SystemParams sn = s;
    sn.quantum.n = n;
    try {
      if (which == FormulaKind::inverse_square_closed_form) {
        rep.formula_levels.push_back(spectra::energy_inverse_square(sn));
      } else {
        const auto mode = which == FormulaKind::exponential_condition
                              ? spectra::ExponentialMode::reference_condition
                              : spectra::ExponentialMode::derived_condition;
        const auto sol = spectra::solve_energy_exponential(sn, cfg.formula_window, mode);
        if (sol.levels.empty()) {
          rep.notes.push_back("formula: no root for n = " + std::to_string(n));
        } else {
          rep.formula_levels.push_back(sol.levels.front());
        }
      }
    } catch (const Error& e) {
      rep.notes.push_back("formula: n = " + std::to_string(n) + ": " + e.what());
    }
  }
  std::stable_sort(rep.formula_levels.begin(), rep.formula_levels.end(),
                   [](const auto& x, const auto& y) { return x.E < y.E; });

  const std::size_t count = std::min(rep.oracle_levels.size(), rep.formula_levels.size());
  for (std::size_t i = 0; i < count; ++i) {
    ComparisonRow row;
    row.index = static_cast<int>(i);
    row.n_formula = rep.formula_levels[i].n;
    row.E_oracle = rep.oracle_levels[i].E;
    row.E_formula = rep.formula_levels[i].E;
    row.abs_gap = std::fabs(row.E_formula - row.E_oracle);
    row.rel_gap = row.abs_gap / std::max(std::fabs(row.E_oracle), 1e-300);
    row.oracle_nodes = rep.oracle_levels[i].nodes.value_or(-1);
    rep.rows.push_back(row);
  }
  return rep;
}

inline constexpr std::string_view comparison_csv_header =
    "index,n_formula,E_oracle,E_formula,abs_gap,rel_gap,oracle_nodes\n";

inline std::string comparison_csv(const ComparisonReport& rep) {
  std::string out(comparison_csv_header);
  for (const auto& r : rep.rows) {
    out += csv::row({csv::num(r.index), csv::num(r.n_formula), csv::num(r.E_oracle),
                     csv::num(r.E_formula), csv::num(r.abs_gap), csv::num(r.rel_gap),
                     csv::num(r.oracle_nodes)});
  }
  return out;
}

}  // namespace pdm::oracle

#endif  // PDM_ODE_ORACLE_HPP
