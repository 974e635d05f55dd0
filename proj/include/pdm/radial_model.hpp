#ifndef PDM_RADIAL_MODEL_HPP
#define PDM_RADIAL_MODEL_HPP

// Parameters of the Morse-plus-Coulomb problem with position-dependent mass
// and the layered coefficient reductions that lead from the radial equation
// to the biconfluent Heun form.
//
//   potential  V(rho) = V1 e^{-lambda rho} + V2 e^{-2 lambda rho} + V3 / rho
//   mass       M(rho) = m0 e^{-a rho}        (exponential)
//              M(rho) = a / rho^2             (inverse square)
//   gauge      A = (0, B rho / 2 + Phi_AB / (2 pi rho), 0)

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace pdm {

struct PhysicalConstants {
  double hbar = 1.0;
  double e_charge = 1.0;
  double c_light = 1.0;
  double m0 = 1.0;
  double k_B = 1.0;

  void validate() const {
    if (!(hbar > 0 && e_charge > 0 && c_light > 0 && m0 > 0 && k_B > 0)) {
      throw Error(ErrorKind::invalid_parameter, "physical constants must be strictly positive");
    }
  }

  /// eB / (hbar c)
  double cyclotron(double B) const { return e_charge * B / (hbar * c_light); }
  double hbar2() const { return hbar * hbar; }
};

struct PotentialParams {
  double V1 = 0.0;
  double V2 = 0.0;
  double V3 = 0.0;
  double lambda = 1.0;

  void validate() const {
    if (!(lambda > 0)) throw Error(ErrorKind::invalid_parameter, "lambda must be > 0");
  }
};

struct FieldConfig {
  double B = 0.0;
  double Phi_AB = 0.0;

  void validate() const {
    if (!(B >= 0 && Phi_AB >= 0)) {
      throw Error(ErrorKind::invalid_parameter, "B and Phi_AB must be non-negative");
    }
  }
};

struct QuantumNumbers {
  int n = 0;
  int m = 0;

  void validate() const {
    if (n < 0) throw Error(ErrorKind::invalid_parameter, "n must be >= 0");
  }
};

enum class MassKind { exponential, inverse_square };

inline std::string_view to_string(MassKind kind) {
  return kind == MassKind::exponential ? "exponential" : "inverse-square";
}

inline MassKind parse_mass_kind(std::string_view s) {
  if (s == "exponential") return MassKind::exponential;
  if (s == "inverse-square") return MassKind::inverse_square;
  throw Error(ErrorKind::argument, "unknown mass case '" + std::string(s) + "'");
}

/// Mass distribution. Exponential accepts a = 0 as the stationary-mass limit.
class MassCase {
 public:
  static MassCase exponential(double a) {
    if (!(a >= 0) || !std::isfinite(a)) {
      throw Error(ErrorKind::invalid_parameter, "exponential mass requires a >= 0");
    }
    return MassCase(MassKind::exponential, a);
  }

  static MassCase inverse_square(double a) {
    if (a == 0 || !std::isfinite(a)) {
      throw Error(ErrorKind::invalid_parameter, "inverse-square mass requires a != 0");
    }
    return MassCase(MassKind::inverse_square, a);
  }

  static MassCase make(MassKind kind, double a) {
    return kind == MassKind::exponential ? exponential(a) : inverse_square(a);
  }

  MassKind kind() const { return kind_; }
  double a() const { return a_; }

  /// M(rho) and M'(rho)/M(rho).
  double mass(double rho, double m0) const {
    return kind_ == MassKind::exponential ? m0 * std::exp(-a_ * rho) : a_ / (rho * rho);
  }
  double log_derivative(double rho) const {
    return kind_ == MassKind::exponential ? -a_ : -2.0 / rho;
  }

 private:
  MassCase(MassKind kind, double a) : kind_(kind), a_(a) {}

  MassKind kind_;
  double a_;
};

/// Full parameter snapshot of one physical configuration.
struct SystemParams {
  MassCase mass = MassCase::exponential(0.5);
  PotentialParams potential;
  FieldConfig fields;
  QuantumNumbers quantum;
  PhysicalConstants constants;

  void validate() const {
    potential.validate();
    fields.validate();
    quantum.validate();
    constants.validate();
  }
};

struct EtaSet {
  double eta1 = 0, eta2 = 0, eta3 = 0, eta4 = 0, eta5 = 0;
};

struct ReducedSet {
  double xi = 0;
  double alpha_sq = 0;
  double c1 = 0;
  double b1 = 0;
  double eps = 0;
};

struct ScaledSet {
  double alpha = 0;
  double eta_s = 0;    // c1 / eps^{1/4}
  double b_tilde = 0;  // b1 / eps^{3/4}
  double delta1 = 0.5; // alpha + 1/2
  std::optional<double> delta2;  // absent when eta_s == 0
  double delta3 = 0;

  /// Constant term of the transformed equation, eta_s - b_tilde * delta1.
  double constant_term() const { return eta_s - b_tilde * delta1; }
};

/// delta = m + e Phi_AB / (c hbar), the flux-shifted magnetic quantum number.
inline double effective_delta(const QuantumNumbers& q, const FieldConfig& f,
                              const PhysicalConstants& k) {
  return q.m + k.e_charge * f.Phi_AB / (k.c_light * k.hbar);
}

inline double effective_delta(const SystemParams& s) {
  return effective_delta(s.quantum, s.fields, s.constants);
}

/// Coefficients of R'' + (1/rho + a) R' + [eta1 + eta2/rho^2 + eta3/rho + eta4 rho + eta5 rho^2] R = 0
/// after the first-order expansion of the exponentials.
inline EtaSet eta_exponential(double E, const PotentialParams& p, double a, const FieldConfig& f,
                              const QuantumNumbers& q, const PhysicalConstants& k) {
  const double delta = effective_delta(q, f, k);
  const double w = k.cyclotron(f.B);
  const double g = 2.0 * k.m0 / k.hbar2();
  const double lam = p.lambda;
  EtaSet out;
  out.eta1 = -w * delta + g * (E - p.V1 - p.V2 - a * p.V3);
  out.eta2 = -delta * delta;
  out.eta3 = -g * p.V3;
  out.eta4 = g * (-a * E + (lam + a) * p.V1 + (2 * lam + a) * p.V2 + 0.5 * a * a * p.V3);
  out.eta5 = -0.25 * w * w + g * (0.5 * a * a * E - a * lam * p.V1 - 2 * a * lam * p.V2);
  return out;
}

/// Coefficients of R'' + (3/rho) R' + [...] R = 0 after the fourth-order expansion
/// of the exponentials (V3 = 0).
inline EtaSet eta_inverse_square(double E, const PotentialParams& p, double a,
                                 const FieldConfig& f, const QuantumNumbers& q,
                                 const PhysicalConstants& k) {
  if (p.V3 != 0.0) {
    throw Error(ErrorKind::invalid_parameter, "inverse-square case assumes V3 = 0");
  }
  if (a == 0.0) throw Error(ErrorKind::invalid_parameter, "inverse-square case requires a != 0");
  const double delta = effective_delta(q, f, k);
  const double w = k.cyclotron(f.B);
  const double h2 = k.hbar2();
  const double lam = p.lambda;
  EtaSet out;
  out.eta1 = -w * delta + lam * lam * a * (p.V1 + 4 * p.V2) / h2;
  out.eta2 = -delta * delta + 2 * a * (E + 2 * p.V1 + 2 * p.V2) / h2;
  out.eta3 = -2 * lam * a * (p.V1 + 2 * p.V2) / h2;
  out.eta4 = -a * lam * lam * lam * (p.V1 + 8 * p.V2) / (3 * h2);
  out.eta5 = -0.25 * w * w - a * std::pow(lam, 4) * (p.V1 + 16 * p.V2) / (12 * h2);
  return out;
}

inline EtaSet eta_for(double E, const SystemParams& s) {
  return s.mass.kind() == MassKind::exponential
             ? eta_exponential(E, s.potential, s.mass.a(), s.fields, s.quantum, s.constants)
             : eta_inverse_square(E, s.potential, s.mass.a(), s.fields, s.quantum, s.constants);
}

namespace detail {
inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace detail

/// Maps the eta coefficients onto the Schrodinger-like normal form
/// f'' + (xi - (alpha^2 - 1/4)/rho^2 + c1/rho - b1 rho - eps rho^2) f = 0.
inline ReducedSet reduce(const EtaSet& e, const MassCase& mass) {
  ReducedSet r;
  if (mass.kind() == MassKind::exponential) {
    const double a = mass.a();
    r.xi = e.eta1 - 0.25 * a * a;
    r.alpha_sq = -e.eta2;
    r.c1 = e.eta3 - 0.25 * a;
  } else {
    r.xi = e.eta1;
    r.alpha_sq = 0.75 - e.eta2;
    r.c1 = e.eta3;
  }
  r.b1 = -e.eta4;
  r.eps = -e.eta5;
  if (r.alpha_sq < 0) {
    throw Error(ErrorKind::complex_index,
                "alpha^2 = " + detail::num(r.alpha_sq) + " < 0: complex Frobenius index");
  }
  if (!(r.eps > 0)) {
    throw Error(ErrorKind::scaling,
                "eps = " + detail::num(r.eps) + " <= 0: chi = eps^(1/4) rho undefined");
  }
  return r;
}

/// Rescales to chi = eps^{1/4} rho.
inline ScaledSet scale(const ReducedSet& r) {
  if (!(r.eps > 0)) {
    throw Error(ErrorKind::scaling, "eps = " + detail::num(r.eps) + " <= 0");
  }
  if (r.alpha_sq < 0) {
    throw Error(ErrorKind::complex_index, "alpha^2 = " + detail::num(r.alpha_sq) + " < 0");
  }
  ScaledSet s;
  const double e4 = std::pow(r.eps, 0.25);
  s.alpha = std::sqrt(r.alpha_sq);
  s.eta_s = r.c1 / e4;
  s.b_tilde = r.b1 / (e4 * e4 * e4);
  s.delta1 = s.alpha + 0.5;
  s.delta3 = r.xi / std::sqrt(r.eps) + 0.25 * s.b_tilde * s.b_tilde - 2.0 * s.delta1 - 1.0;
  if (s.eta_s != 0.0) s.delta2 = 1.0 - s.delta1 * s.b_tilde / s.eta_s;
  return s;
}

/// Convenience: the whole chain E -> EtaSet -> ReducedSet -> ScaledSet.
inline ScaledSet scaled_at(double E, const SystemParams& s) {
  return scale(reduce(eta_for(E, s), s.mass));
}

}  // namespace pdm

#endif  // PDM_RADIAL_MODEL_HPP
