#ifndef PDM_SPECTRA_HPP
#define PDM_SPECTRA_HPP

// Bound-state energies.
//
//  * exponential mass: roots of the transcendental quantization condition
//      4[-w delta + g(E - V1 - V2 - a V3) - a^2/4]
//        + sqrt(eps(E)) {[g(-aE + (lam+a)V1 + (2lam+a)V2 + a^2 V3/2)]^2 - 4 - 8(delta + 1/2 - n)} = 0
//    with w = eB/(hbar c), g = 2 m0/hbar^2, eps(E) = (w/2)^2 - g(a^2 E/2 - a lam V1 - 2 a lam V2);
//  * its a = 0 limit, linear in E;
//  * an alternative "derived" condition D3(E) = 2n through the coefficient chain;
//  * inverse-square mass: the closed form
//      E = -(hbar^2/2a)(n - zeta)^2 + (hbar^2/2a) delta^2 + 3 hbar^2/(8a) - 2(V1 + V2).

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "radial_model.hpp"
#include "root_finding.hpp"

namespace pdm::spectra {

enum class Method { root_exponential, stationary_check, closed_inverse_square, oracle, derived_condition };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::root_exponential: return "root-exponential";
    case Method::stationary_check: return "stationary-check";
    case Method::closed_inverse_square: return "closed-inverse-square";
    case Method::oracle: return "oracle";
    case Method::derived_condition: return "derived-condition";
  }
  return "unknown";
}

struct EnergyLevel {
  double E = 0;
  int n = 0;
  int m = 0;
  double residual = 0;
  Method method = Method::root_exponential;
  std::optional<roots::Bracket> bracket;
  int iterations = 0;
  std::optional<int> nodes;  // oracle levels only
};

struct ScanWindow {
  double E_lo = -50.0;
  double E_hi = 50.0;
  int n_grid = 400;
};

/// Which quantization condition the exponential-mass solver root-finds.
enum class ExponentialMode { reference_condition, derived_condition };

inline std::string_view to_string(ExponentialMode m) {
  return m == ExponentialMode::reference_condition ? "reference" : "derived";
}

inline constexpr double root_residual_tolerance = 1e-10;

namespace detail {

struct ExpTerms {
  double w, g, delta, lam, a;
};

inline ExpTerms exp_terms(const SystemParams& s) {
  return {s.constants.cyclotron(s.fields.B), 2.0 * s.constants.m0 / s.constants.hbar2(),
          effective_delta(s), s.potential.lambda, s.mass.a()};
}

// eps(E) of the exponential chain: (w/2)^2 - g(a^2 E/2 - a lam V1 - 2 a lam V2).
inline double exp_eps(double E, const SystemParams& s, const ExpTerms& t) {
  const auto& p = s.potential;
  return 0.25 * t.w * t.w - t.g * (0.5 * t.a * t.a * E - t.a * t.lam * p.V1 - 2 * t.a * t.lam * p.V2);
}

inline void require_exponential(const SystemParams& s) {
  if (s.mass.kind() != MassKind::exponential) {
    throw Error(ErrorKind::invalid_parameter, "operation requires the exponential mass case");
  }
}

}  // namespace detail

/// Largest E at which the square root of the exponential condition is real;
/// nullopt when it is real for every E (a = 0).
inline std::optional<double> exponential_realness_bound(const SystemParams& s) {
  detail::require_exponential(s);
  const auto t = detail::exp_terms(s);
  if (t.a == 0.0) return std::nullopt;
  const auto& p = s.potential;
  // eps(E) = 0  <=>  E = [ (w/2)^2 / g + a lam V1 + 2 a lam V2 ] * 2 / a^2
  return (0.25 * t.w * t.w / t.g + t.a * t.lam * p.V1 + 2 * t.a * t.lam * p.V2) * 2.0 / (t.a * t.a);
}

/// Left-hand side of the exponential-mass quantization condition.
inline double exponential_condition_residual(double E, const SystemParams& s) {
  detail::require_exponential(s);
  const auto t = detail::exp_terms(s);
  const auto& p = s.potential;
  const double eps = detail::exp_eps(E, s, t);
  if (eps < 0) {
    const auto bound = exponential_realness_bound(s);
    throw Error(ErrorKind::branch, "square-root argument " + pdm::detail::num(eps) +
                                       " < 0 at E = " + pdm::detail::num(E) +
                                       "; real only for E <= " + pdm::detail::num(bound.value_or(0)));
  }
  const double n = s.quantum.n;
  const double first =
      4.0 * (-t.w * t.delta + t.g * (E - p.V1 - p.V2 - t.a * p.V3) - 0.25 * t.a * t.a);
  const double eta4 = t.g * (-t.a * E + (t.lam + t.a) * p.V1 + (2 * t.lam + t.a) * p.V2 +
                             0.5 * t.a * t.a * p.V3);
  const double bracket = eta4 * eta4 - 4.0 - 8.0 * (t.delta + 0.5 - n);
  return first + std::sqrt(eps) * bracket;
}

/// Left-hand side of the stationary-mass (a = 0) condition; linear in E.
inline double stationary_condition_residual(double E, const SystemParams& s) {
  const auto t = detail::exp_terms(s);
  const auto& p = s.potential;
  const double n = s.quantum.n;
  // Same operation order as the exponential condition so the a = 0 limit
  // agrees bit for bit; sqrt((w/2)^2) is the field term eB/(2 hbar c).
  const double v = t.g * (t.lam * p.V1 + 2 * t.lam * p.V2);
  return 4.0 * (-t.w * t.delta + t.g * (E - p.V1 - p.V2)) +
         std::sqrt(0.25 * t.w * t.w) * (v * v - 4.0 - 8.0 * (t.delta + 0.5 - n));
}

/// Closed-form root of the stationary condition.
inline EnergyLevel stationary_level(const SystemParams& s) {
  const auto t = detail::exp_terms(s);
  // residual(E) = residual(0) + 4 g E
  const double E = -stationary_condition_residual(0.0, s) / (4.0 * t.g);
  EnergyLevel lvl;
  lvl.E = E;
  lvl.n = s.quantum.n;
  lvl.m = s.quantum.m;
  lvl.residual = stationary_condition_residual(E, s);
  lvl.method = Method::stationary_check;
  return lvl;
}

/// D3(E) - 2n from the coefficient chain (exponential mass).
inline double derived_condition_residual(double E, const SystemParams& s) {
  detail::require_exponential(s);
  return scaled_at(E, s).delta3 - 2.0 * s.quantum.n;
}

struct SolveResult {
  std::vector<EnergyLevel> levels;
  std::vector<std::string> notes;
};

/// All roots of the selected exponential-mass condition inside the window,
/// ascending. An empty list comes with a "no-root" note.
inline SolveResult solve_energy_exponential(const SystemParams& s, const ScanWindow& w = {},
                                            ExponentialMode mode = ExponentialMode::reference_condition) {
  detail::require_exponential(s);
  if (!(w.E_lo < w.E_hi) || w.n_grid < 1) {
    throw Error(ErrorKind::argument, "scan window requires E_lo < E_hi and n_grid >= 1");
  }
  SolveResult out;
  double hi = w.E_hi;
  if (mode == ExponentialMode::reference_condition) {
    if (auto bound = exponential_realness_bound(s); bound && *bound < hi) {
      out.notes.push_back("skipped E > " + csv::num(*bound) + " (square root not real)");
      hi = *bound;
    }
  }
  if (!(w.E_lo < hi)) {
    out.notes.push_back("no-root: window lies entirely outside the real branch");
    return out;
  }
  auto f = [&](double E) -> std::optional<double> {
    try {
      return mode == ExponentialMode::reference_condition ? exponential_condition_residual(E, s)
                                                      : derived_condition_residual(E, s);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const auto scan = roots::scan_roots(f, w.E_lo, hi, w.n_grid);
  if (scan.non_finite_points > 0) {
    throw Error(ErrorKind::domain, "non-finite residual at " +
                                       std::to_string(scan.non_finite_points) + " scan points");
  }
  if (scan.undefined_points > 0) {
    out.notes.push_back("skipped " + std::to_string(scan.undefined_points) +
                        " scan points where the condition is undefined");
  }
  for (const auto& r : scan.roots) {
    EnergyLevel lvl;
    lvl.E = r.x;
    lvl.n = s.quantum.n;
    lvl.m = s.quantum.m;
    lvl.residual = r.residual;
    lvl.method = mode == ExponentialMode::reference_condition ? Method::root_exponential
                                                          : Method::derived_condition;
    lvl.bracket = r.bracket;
    lvl.iterations = r.iterations;
    out.levels.push_back(lvl);
  }
  if (out.levels.empty()) out.notes.push_back("no-root: no sign change in the scan window");
  return out;
}

namespace detail {

struct InverseSquareTerms {
  double frac;       // (-w delta + lam^2 a (V1 + 4 V2)/hbar^2) / (2 sqrt(...))
  double quartic;    // (1/8) [a lam^3 (V1 + 8 V2) / (3 hbar^2)]^2
};

inline InverseSquareTerms inverse_square_terms(const SystemParams& s) {
  if (s.mass.kind() != MassKind::inverse_square) {
    throw Error(ErrorKind::invalid_parameter, "operation requires the inverse-square mass case");
  }
  const auto& k = s.constants;
  const auto& p = s.potential;
  if (p.V3 != 0.0) throw Error(ErrorKind::invalid_parameter, "inverse-square case assumes V3 = 0");
  const double a = s.mass.a();
  const double h2 = k.hbar2();
  const double w = k.cyclotron(s.fields.B);
  const double lam = p.lambda;
  const double delta = effective_delta(s);
  const double root_arg = 0.25 * w * w + a * std::pow(lam, 4) * (p.V1 + 16 * p.V2) / (12 * h2);
  if (!(root_arg > 0)) {
    throw Error(ErrorKind::degenerate,
                "square root (eB/2hbar c)^2 + a lambda^4 (V1 + 16 V2)/12 hbar^2 = " +
                    pdm::detail::num(root_arg) + " is not positive");
  }
  const double frac = (-w * delta + lam * lam * a * (p.V1 + 4 * p.V2) / h2) / (2.0 * std::sqrt(root_arg));
  const double c = a * lam * lam * lam * (p.V1 + 8 * p.V2) / (3 * h2);
  return {frac, 0.125 * c * c};
}

}  // namespace detail

/// zeta = -frac - (1/8)[...]^2 + 1, so that the closed form reads -(hbar^2/2a)(n - zeta)^2 + ...
inline double inverse_square_zeta(const SystemParams& s) {
  const auto t = detail::inverse_square_terms(s);
  return -t.frac - t.quartic + 1.0;
}

/// Constant part hbar^2 delta^2/(2a) + 3 hbar^2/(8a) - 2(V1 + V2) of the closed form.
inline double inverse_square_offset(const SystemParams& s) {
  const double a = s.mass.a();
  const double h2 = s.constants.hbar2();
  const double delta = effective_delta(s);
  return h2 * delta * delta / (2 * a) + 3 * h2 / (8 * a) - 2 * (s.potential.V1 + s.potential.V2);
}

inline EnergyLevel energy_inverse_square(const SystemParams& s) {
  const auto t = detail::inverse_square_terms(s);
  const double a = s.mass.a();
  const double h2 = s.constants.hbar2();
  const double brace = t.frac + t.quartic - 1.0 + s.quantum.n;
  EnergyLevel lvl;
  lvl.E = -h2 / (2 * a) * brace * brace + inverse_square_offset(s);
  lvl.n = s.quantum.n;
  lvl.m = s.quantum.m;
  lvl.residual = 0.0;
  lvl.method = Method::closed_inverse_square;
  return lvl;
}

// --- sweeps -----------------------------------------------------------------

enum class SweepVar { a, lambda, B, Phi_AB, T };

inline std::string_view to_string(SweepVar v) {
  switch (v) {
    case SweepVar::a: return "a";
    case SweepVar::lambda: return "lambda";
    case SweepVar::B: return "B";
    case SweepVar::Phi_AB: return "Phi";
    case SweepVar::T: return "T";
  }
  return "?";
}

inline SweepVar parse_sweep_var(std::string_view s) {
  if (s == "a") return SweepVar::a;
  if (s == "lambda") return SweepVar::lambda;
  if (s == "B") return SweepVar::B;
  if (s == "Phi" || s == "Phi_AB") return SweepVar::Phi_AB;
  if (s == "T") return SweepVar::T;
  throw Error(ErrorKind::argument, "unknown sweep variable '" + std::string(s) + "'");
}

struct SweepSpec {
  SweepVar vary = SweepVar::a;
  double lo = 0.1;
  double hi = 2.0;
  int steps = 20;
  SystemParams fixed;
  ScanWindow window;
  ExponentialMode mode = ExponentialMode::reference_condition;

  void validate() const {
    if (!(lo < hi)) throw Error(ErrorKind::argument, "sweep requires lo < hi");
    if (steps < 2) throw Error(ErrorKind::argument, "sweep requires steps >= 2");
  }

  double grid(int i) const { return i + 1 == steps ? hi : lo + (hi - lo) * i / (steps - 1); }
};

struct SweepRow {
  double x = 0;
  std::optional<double> E;
  SystemParams params;
  std::string status = "ok";
};

/// Copy of `base` with the sweep variable set to x. T does not enter the spectrum.
inline SystemParams with_value(const SystemParams& base, SweepVar v, double x) {
  SystemParams p = base;
  switch (v) {
    case SweepVar::a: p.mass = MassCase::make(base.mass.kind(), x); break;
    case SweepVar::lambda: p.potential.lambda = x; break;
    case SweepVar::B: p.fields.B = x; break;
    case SweepVar::Phi_AB: p.fields.Phi_AB = x; break;
    case SweepVar::T: break;
  }
  return p;
}

/// Lowest level for one configuration: the smallest root for the exponential
/// mass, the closed form for the inverse-square mass.
inline SweepRow evaluate_point(const SystemParams& p, const ScanWindow& w, ExponentialMode mode) {
  SweepRow row;
  row.params = p;
  try {
    p.validate();
    if (p.mass.kind() == MassKind::inverse_square) {
      row.E = energy_inverse_square(p).E;
    } else {
      const auto res = solve_energy_exponential(p, w, mode);
      if (res.levels.empty()) {
        row.status = "no-root";
      } else {
        row.E = res.levels.front().E;
      }
    }
  } catch (const Error& e) {
    row.status = std::string(to_string(e.kind()));
  }
  return row;
}

inline std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads = 1) {
  spec.validate();
  std::vector<SweepRow> rows(static_cast<std::size_t>(spec.steps));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const double x = spec.grid(static_cast<int>(i));
    SweepRow row;
    try {
      row = evaluate_point(with_value(spec.fixed, spec.vary, x), spec.window, spec.mode);
    } catch (const Error& e) {
      row.params = spec.fixed;
      row.status = std::string(to_string(e.kind()));
    }
    row.x = x;
    rows[i] = row;
  });
  return rows;
}

inline constexpr std::string_view sweep_csv_header = "x,E,n,m,B,Phi,a,lambda,V1,V2,V3,status\n";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(sweep_csv_header);
  for (const auto& r : rows) {
    const auto& p = r.params;
    out += csv::row({csv::num(r.x), r.E ? csv::num(*r.E) : "nan", csv::num(p.quantum.n),
                     csv::num(p.quantum.m), csv::num(p.fields.B), csv::num(p.fields.Phi_AB),
                     csv::num(p.mass.a()), csv::num(p.potential.lambda), csv::num(p.potential.V1),
                     csv::num(p.potential.V2), csv::num(p.potential.V3), r.status});
  }
  return out;
}

}  // namespace pdm::spectra

#endif  // PDM_SPECTRA_HPP
