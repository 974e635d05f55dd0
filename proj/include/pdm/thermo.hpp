#ifndef PDM_THERMO_HPP
#define PDM_THERMO_HPP

// Canonical thermodynamics of the inverse-square-mass spectrum in the
// high-temperature reduction
//
//   Z = sum_{n=0}^{floor(zeta)} exp([(n - zeta)/gamma]^2)
//     ~ gamma int_0^theta e^{t^2} dt = gamma (sqrt(pi)/2) erfi(theta),
//
// gamma = tau/sqrt(beta), tau = 2a/hbar^2, theta = zeta sqrt(beta)/tau. The
// gamma prefactor is kept because it carries sqrt(beta). With the Dawson
// function D:
//
//   U  = -d ln Z / d beta     = (1 - theta/D(theta)) / (2 beta)
//   Cv = k_B beta^2 d^2 ln Z / d beta^2 = (k_B/2) [1 - g + theta g'/2],  g = theta/D(theta)
//   F  = -ln Z / beta,  S = k_B ln Z + k_B beta U.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "radial_model.hpp"
#include "special_functions.hpp"
#include "spectra.hpp"

namespace pdm::thermo {

struct ThermoParams {
  double beta = 1;
  double tau = 1;
  double zeta = 1;
  double gamma = 1;
  double theta = 1;
};

struct ThermoState {
  double T = 0;
  double beta = 0;
  double theta = 0;
  double Z = 0;      // integral form
  double Z_sum = 0;  // direct finite sum
  double gap = 0;    // |Z_sum - Z| / Z_sum
  double U = 0;
  double F = 0;
  double S = 0;
  double Cv = 0;
  double high_t_factor = 1;  // exp(-beta * constant part of the spectrum)
  bool high_t_valid = true;  // |high_t_factor - 1| <= 0.1
};

/// Relative deviation of the dropped Boltzmann factor from 1 beyond which a
/// state is flagged as outside the high-temperature reduction.
inline constexpr double high_t_tolerance = 0.1;

/// Below this theta, U and Cv use their Maclaurin expansions.
inline constexpr double small_theta = 0.1;

/// Parameters at temperature T. Requires the inverse-square mass with a > 0.
inline ThermoParams thermo_params(const SystemParams& s, double T) {
  if (s.mass.kind() != MassKind::inverse_square) {
    throw Error(ErrorKind::invalid_parameter, "thermodynamics is defined for the inverse-square mass");
  }
  if (!(T > 0)) throw Error(ErrorKind::argument, "temperature must be > 0");
  if (!(s.mass.a() > 0)) throw Error(ErrorKind::invalid_parameter, "thermodynamics requires a > 0");
  ThermoParams p;
  p.beta = 1.0 / (s.constants.k_B * T);
  p.tau = 2.0 * s.mass.a() / s.constants.hbar2();
  p.zeta = spectra::inverse_square_zeta(s);
  if (!(p.zeta > 0)) {
    throw Error(ErrorKind::approximation_domain,
                "high-temperature reduction requires a positive level range (zeta = " +
                    csv::num(p.zeta) + ")");
  }
  p.gamma = p.tau / std::sqrt(p.beta);
  p.theta = p.zeta * std::sqrt(p.beta) / p.tau;
  return p;
}

inline double partition_integral(const ThermoParams& p) {
  if (p.theta > special::erfi_overflow_guard) {
    throw Error(ErrorKind::range, "theta = " + csv::num(p.theta) +
                                      " exceeds the erfi overflow guard; use a higher T or smaller zeta");
  }
  return p.gamma * 0.5 * (1.0 / std::numbers::inv_sqrtpi) * special::erfi(p.theta).value;
}

/// sum_{n=0}^{floor(zeta)} exp([(n - zeta)/gamma]^2).
inline double partition_direct_sum(double zeta, double gamma) {
  if (!(zeta > 0)) throw Error(ErrorKind::approximation_domain, "direct sum requires zeta > 0");
  const long top = static_cast<long>(std::floor(zeta));
  double z = 0.0;
  for (long n = 0; n <= top; ++n) {
    const double u = (static_cast<double>(n) - zeta) / gamma;
    z += std::exp(u * u);
  }
  return z;
}

inline double partition_direct_sum(const SystemParams& s, double T) {
  const auto p = thermo_params(s, T);
  return partition_direct_sum(p.zeta, p.gamma);
}

namespace detail {

// g(x) = x / D(x) = 1 + 2x^2/3 + 8x^4/45 + 16x^6/945 - 32x^8/14175 - 64x^10/93555 + ...
inline double one_minus_g_series(double x) {
  const double x2 = x * x;
  return -x2 * (2.0 / 3 + x2 * (8.0 / 45 + x2 * (16.0 / 945 + x2 * (-32.0 / 14175 + x2 * (-64.0 / 93555)))));
}

// 1 - g + x g'/2 = 8x^4/45 + 32x^6/945 - 32x^8/4725 - 256x^10/93555 + ...
inline double heat_bracket_series(double x) {
  const double x2 = x * x;
  return x2 * x2 * (8.0 / 45 + x2 * (32.0 / 945 + x2 * (-32.0 / 4725 + x2 * (-256.0 / 93555))));
}

}  // namespace detail

/// U = -d ln Z / d beta.
inline double internal_energy(const ThermoParams& p) {
  const double x = p.theta;
  if (x == 0.0) return 0.0;
  if (std::fabs(x) < small_theta) return detail::one_minus_g_series(x) / (2.0 * p.beta);
  const double D = special::dawson(x).value;
  return (1.0 - x / D) / (2.0 * p.beta);
}

/// Cv = -k_B beta^2 dU/d beta, differentiating through theta(beta).
inline double specific_heat(const ThermoParams& p, double k_B = 1.0) {
  const double x = p.theta;
  if (x == 0.0) return 0.0;
  double bracket;
  if (std::fabs(x) < small_theta) {
    bracket = detail::heat_bracket_series(x);
  } else {
    const double D = special::dawson(x).value;
    const double g = x / D;
    const double dg = (D - x + 2.0 * x * x * D) / (D * D);  // uses D' = 1 - 2xD
    bracket = 1.0 - g + 0.5 * x * dg;
  }
  return 0.5 * k_B * bracket;
}

struct FreeEnergyEntropy {
  double F = 0;
  double S = 0;
};

/// F = -ln Z / beta, S = k_B ln Z + k_B beta U.
inline FreeEnergyEntropy entropy_and_free_energy(const ThermoParams& p, double k_B = 1.0) {
  const double Z = partition_integral(p);
  if (!(Z > 0)) throw Error(ErrorKind::domain, "partition function must be positive");
  const double lnZ = std::log(Z);
  const double U = internal_energy(p);
  return {-lnZ / p.beta, k_B * lnZ + k_B * p.beta * U};
}

/// Full state at T, including the direct-sum comparison and the validity flag.
inline ThermoState evaluate_state(const SystemParams& s, double T) {
  const auto p = thermo_params(s, T);
  ThermoState st;
  st.T = T;
  st.beta = p.beta;
  st.theta = p.theta;
  st.Z = partition_integral(p);
  st.Z_sum = partition_direct_sum(p.zeta, p.gamma);
  st.gap = std::fabs(st.Z_sum - st.Z) / st.Z_sum;
  st.U = internal_energy(p);
  const auto fs = entropy_and_free_energy(p, s.constants.k_B);
  st.F = fs.F;
  st.S = fs.S;
  st.Cv = specific_heat(p, s.constants.k_B);
  st.high_t_factor = std::exp(-p.beta * spectra::inverse_square_offset(s));
  st.high_t_valid = std::fabs(st.high_t_factor - 1.0) <= high_t_tolerance;
  return st;
}

struct ThermoRow {
  std::optional<ThermoState> state;
  double T = 0;
  std::string status = "ok";
};

/// States on a uniform temperature grid; failures become per-row status.
inline std::vector<ThermoRow> temperature_table(const SystemParams& s, double T_lo, double T_hi,
                                                int steps, unsigned threads = 1) {
  if (!(T_lo > 0 && T_lo < T_hi) || steps < 2) {
    throw Error(ErrorKind::argument, "temperature grid requires 0 < T_lo < T_hi and steps >= 2");
  }
  std::vector<ThermoRow> rows(static_cast<std::size_t>(steps));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const double T = (static_cast<int>(i) + 1 == steps)
                         ? T_hi
                         : T_lo + (T_hi - T_lo) * static_cast<double>(i) / (steps - 1);
    ThermoRow row;
    row.T = T;
    try {
      row.state = evaluate_state(s, T);
    } catch (const Error& e) {
      row.status = std::string(to_string(e.kind()));
    }
    rows[i] = row;
  });
  return rows;
}

inline constexpr std::string_view thermo_csv_header =
    "T,beta,theta,Z_integral,Z_sum,gap,U,F,S,Cv,validity_flag\n";

inline std::string thermo_csv(const std::vector<ThermoRow>& rows) {
  std::string out(thermo_csv_header);
  const std::string nan = "nan";
  for (const auto& r : rows) {
    if (!r.state) {
      out += csv::row({csv::num(r.T), nan, nan, nan, nan, nan, nan, nan, nan, nan, r.status});
      continue;
    }
    const auto& s = *r.state;
    out += csv::row({csv::num(s.T), csv::num(s.beta), csv::num(s.theta), csv::num(s.Z),
                     csv::num(s.Z_sum), csv::num(s.gap), csv::num(s.U), csv::num(s.F),
                     csv::num(s.S), csv::num(s.Cv), s.high_t_valid ? "ok" : "outside-high-T"});
  }
  return out;
}

}  // namespace pdm::thermo

#endif  // PDM_THERMO_HPP
