#ifndef PDM_REPORT_HPP
#define PDM_REPORT_HPP

// DISCREPANCIES.md: numeric evidence for every place where the reference
// formulas, the re-derived ones and the shooting oracle disagree.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "figures.hpp"
#include "heun_series.hpp"
#include "ode_oracle.hpp"
#include "radial_model.hpp"
#include "special_functions.hpp"
#include "spectra.hpp"
#include "thermo.hpp"

namespace pdm::report {

namespace detail {

inline std::string g(double v, int digits = 10) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline SystemParams exp_defaults(double a) {
  SystemParams s;
  s.mass = MassCase::exponential(a);
  s.potential = {0.5, 0.5, 0.5, 0.1};
  s.fields = {1.0, 1.0};
  s.quantum = {1, 0};
  return s;
}

inline SystemParams inv_defaults() {
  SystemParams s;
  s.mass = MassCase::inverse_square(1.0);
  s.potential = {0.01, 0.01, 0.0, 1.0};
  s.fields = {2.0, 2.0};
  s.quantum = {1, 0};
  return s;
}

inline SystemParams thermo_defaults() {
  SystemParams s;
  s.mass = MassCase::inverse_square(1.0);
  s.potential = {0.01, 0.01, 0.0, 1.0};
  s.fields = {1.0, 1.0};
  s.quantum = {0, 0};
  return s;
}

inline std::string lowest_root(const SystemParams& s, spectra::ExponentialMode mode) {
  try {
    const auto r = spectra::solve_energy_exponential(s, {}, mode);
    return r.levels.empty() ? "no root" : g(r.levels.front().E);
  } catch (const Error& e) {
    return std::string(to_string(e.kind()));
  }
}

inline void comparison_table(std::string& out, const std::string& title, const SystemParams& s,
                             oracle::FormulaKind which, const oracle::ComparisonSettings& cfg) {
  out += "### " + title + "\n\n";
  out += "Formula: `" + std::string(oracle::to_string(which)) + "`, oracle window [" + g(cfg.E_lo) +
         ", " + g(cfg.E_hi) + "], " + (cfg.form == oracle::OdeForm::expanded ? "expanded" : "full") +
         " radial equation.\n\n";
  try {
    const auto rep = oracle::compare_with_closed_form(s, which, cfg);
    out += "Oracle levels:";
    if (rep.oracle_levels.empty()) out += " none";
    for (const auto& l : rep.oracle_levels) out += " " + g(l.E) + " (" + std::to_string(l.nodes.value_or(-1)) + " nodes)";
    out += "\n\nFormula levels:";
    if (rep.formula_levels.empty()) out += " none";
    for (const auto& l : rep.formula_levels) out += " n=" + std::to_string(l.n) + ": " + g(l.E);
    out += "\n\n";
    if (!rep.rows.empty()) {
      out += "| index | n (formula) | E oracle | E formula | abs gap | rel gap |\n";
      out += "|---|---|---|---|---|---|\n";
      for (const auto& r : rep.rows) {
        out += "| " + std::to_string(r.index) + " | " + std::to_string(r.n_formula) + " | " + g(r.E_oracle) +
               " | " + g(r.E_formula) + " | " + g(r.abs_gap, 4) + " | " + g(r.rel_gap, 4) + " |\n";
      }
      out += "\n";
    }
    for (const auto& n : rep.notes) out += "- " + n + "\n";
    if (!rep.notes.empty()) out += "\n";
  } catch (const Error& e) {
    out += "Comparison failed: " + std::string(to_string(e.kind())) + ": " + e.what() + "\n\n";
  }
}

}  // namespace detail

inline std::string section_special_functions() {
  using detail::g;
  std::string out = "## special-fn\n\n";
  double worst = 0, worst_x = 0;
  for (int i = 0; i <= 120; ++i) {
    const double x = -6.0 + 0.1 * i;
    const double h = 1e-5;
    const double d = (special::dawson(x + h).value - special::dawson(x - h).value) / (2 * h);
    const double r = std::fabs(d - (1.0 - 2.0 * x * special::dawson(x).value));
    if (r > worst) worst = r, worst_x = x;
  }
  out += "- Dawson derivative identity D' = 1 - 2xD holds to " + g(worst, 3) + " (worst at x = " +
         g(worst_x, 3) + ", central differences, h = 1e-5).\n";
  const double x = 0.68;
  out += "- The reference partition function treats erf and erfi as interchangeable. They are not: at x = " +
         g(x, 3) + ", erf = " + g(special::erf(x).value) + " while erfi = " + g(special::erfi(x).value) +
         ". The erfi form is the one equal to the integral of exp(t^2) and is used throughout.\n";
  out += "- The reference relation between Dawson and erfi carries sqrt(x) where sqrt(pi) belongs; D(x) = (sqrt(pi)/2) "
         "exp(-x^2) erfi(x). At x = " + g(x, 3) + ": D = " + g(special::dawson(x).value) + ", with sqrt(x) in its place " +
         g(std::sqrt(x) / 2 * std::exp(-x * x) * special::erfi(x).value) + ".\n\n";
  return out;
}

inline std::string section_radial_model() {
  using detail::g;
  std::string out = "## radial-model\n\n";
  const auto s = detail::exp_defaults(0.5);
  const double a = s.mass.a();
  out += "Reference point: exponential mass, a = 0.5, V1 = V2 = V3 = 0.5, lambda = 0.1, B = Phi = 1, m = 0.\n\n";
  out += "- Removing the first-derivative term (1/rho + a) R' through R = rho^{-1/2} e^{-a rho/2} f shifts the 1/rho "
         "coefficient by -a/2. The reference reduction uses -a/4, which is what the library implements; the difference in "
         "c1 is " + g(a / 4) + " here.\n";
  out += "- Expanding e^{-a rho} V3/rho to first order gives +a V3 in the constant coefficient; the reference constant "
         "coefficient has -a V3. Difference in eta1 at this point: " +
         g(4.0 * a * s.potential.V3 * s.constants.m0 / s.constants.hbar2()) + ".\n";
  out += "- The rho and rho^2 coefficients of the exponential case keep a^2 terms from the second-order expansion while "
         "the rest of the equation is expanded to first order.\n";
  out += "- Inverse-square mass: with R' coefficient 3/rho the normal form has alpha^2 = 1 - eta2; the reference "
         "reduction uses 3/4 - eta2, shifting alpha^2 by 1/4.\n";
  out += "- Imposing D3 = 2n on the reduced coefficients gives 4 xi + b1^2/eps - 8 sqrt(eps)(alpha + 1 + n) = 0. The "
         "reference energy condition instead reads 4 xi + sqrt(eps)(b1^2 - 4) - 8 sqrt(eps)(alpha + 1/2 - n) = 0 and "
         "then uses delta in place of alpha = |delta|. See the spectra section for the resulting energies.\n\n";
  return out;
}

inline std::string section_heun() {
  using detail::g;
  std::string out = "## heun-series\n\n";
  ScaledSet s;
  s.alpha = 0.7;
  s.delta1 = 1.2;
  s.eta_s = 0.9;
  s.b_tilde = 0.4;
  s.delta3 = 1.3;
  const auto r = heun::reduced_from_scaled(s);
  std::vector<double> grid;
  for (int i = 1; i <= 40; ++i) grid.push_back(0.05 * i);
  const auto sd = heun::build_series_for(s, 2.0, heun::Recurrence::derived);
  const auto sp = heun::build_series_for(s, 2.0, heun::Recurrence::reference);
  out += "Sample set alpha = 0.7, eta = 0.9, b = 0.4, D3 = 1.3 (eps = 1), chi in (0, 2].\n\n";
  out += "- Substituting the series into the transformed equation gives the recurrence "
         "(n+2)(n+1+2 D1) A_{n+2} = [b (n+1) - K] A_{n+1} + (2n - D3) A_n with K = eta - b D1. The reference "
         "recurrence flips the sign of the whole A_{n+1} term and its first coefficient is A1 = +K/(2 D1) instead of "
         "-K/(2 D1).\n";
  out += "- One reference form of the transformed equation carries +b chi in the F' coefficient where the envelope produces "
         "-b chi.\n";
  out += "- Normalized residual of the reassembled f in the normal-form equation: derived recurrence " +
         g(heun::ode_residual(sd, r, grid), 3) + ", reference recurrence " + g(heun::ode_residual(sp, r, grid), 3) +
         ".\n";
  out += "- The reference starting values set A0 = 0, which makes every coefficient vanish; A0 = 1 is used.\n";
  out += "- Series coefficients: derived A1..A3 = " + g(sd.coeffs[1]) + ", " + g(sd.coeffs[2]) + ", " +
         g(sd.coeffs[3]) + "; reference signs give " + g(sp.coeffs[1]) + ", " + g(sp.coeffs[2]) + ", " +
         g(sp.coeffs[3]) + ".\n\n";
  return out;
}

inline std::string section_spectra() {
  using detail::g;
  std::string out = "## spectra\n\n";
  out += "Lowest root per n of the reference exponential-mass condition against the D3 = 2n condition (V1 = V2 = V3 = "
         "0.5, lambda = 0.1, B = Phi = 1, m = 0, window [-50, 50]).\n\n";
  out += "| a | n | reference condition | derived condition |\n|---|---|---|---|\n";
  for (double a : {0.1, 0.5, 1.0}) {
    for (int n = 1; n <= 3; ++n) {
      auto s = detail::exp_defaults(a);
      s.quantum.n = n;
      out += "| " + g(a) + " | " + std::to_string(n) + " | " +
             detail::lowest_root(s, spectra::ExponentialMode::reference_condition) + " | " +
             detail::lowest_root(s, spectra::ExponentialMode::derived_condition) + " |\n";
    }
  }
  out += "\nThe reference condition lowers the energy as n grows at fixed parameters; the D3 = 2n condition raises it.\n\n";
  auto s0 = detail::exp_defaults(0.0);
  const auto st = spectra::stationary_level(s0);
  out += "- Stationary mass (a = 0): the condition becomes linear in E, E = " + g(st.E) +
         ", and the exponential-mass condition at a = 0 reproduces it bit for bit.\n";
  out += "- The reference condition contains sqrt(eps(E)) and has no real value above E = " +
         g(spectra::exponential_realness_bound(detail::exp_defaults(0.5)).value_or(NAN)) +
         " at a = 0.5; scans stop there.\n";
  const auto si = detail::inv_defaults();
  out += "- Inverse-square closed form at V1 = V2 = 0.01, lambda = 1, a = 1, B = Phi = 2, m = 0:";
  for (int n = 0; n <= 3; ++n) {
    auto sn = si;
    sn.quantum.n = n;
    out += " n=" + std::to_string(n) + ": " + g(spectra::energy_inverse_square(sn).E);
  }
  out += ". The closed form is not monotone in n because (n - zeta)^2 enters with a negative sign. It comes from "
         "D3 = 2n alone; A_{n+1} = 0 is never imposed, so these are not polynomial solutions of the expanded equation "
         "(see ode-oracle).\n\n";
  return out;
}

inline std::string section_thermo() {
  using detail::g;
  std::string out = "## thermo\n\n";
  const auto s = detail::thermo_defaults();
  const double T = 2.0;
  out += "Reference point: inverse-square mass, a = 1, B = Phi = 1, lambda = 1, V1 = V2 = 0.01, m = 0, T = 2 (k_B = 1).\n\n";
  try {
    const auto p = thermo::thermo_params(s, T);
    const double D = special::dawson(p.theta).value;
    const double erfi = special::erfi(p.theta).value;
    const double U = thermo::internal_energy(p);
    const double U_first = (1.0 - p.theta / D) / p.beta;
    const double U_second =
        -2.0 * p.theta / (std::sqrt(std::numbers::pi) * erfi) *
        (std::exp(p.theta * p.theta) / (2 * p.beta) - std::sqrt(std::numbers::pi) * erfi / (4 * p.beta * p.theta));
    auto lnZ = [&](double beta) {
      thermo::ThermoParams q = p;
      q.beta = beta;
      q.gamma = q.tau / std::sqrt(beta);
      q.theta = q.zeta * std::sqrt(beta) / q.tau;
      return std::log(thermo::partition_integral(q));
    };
    const double h = 1e-5 * p.beta;
    const double U_fd = -(lnZ(p.beta + h) - lnZ(p.beta - h)) / (2 * h);
    out += "zeta = " + g(p.zeta) + ", tau = " + g(p.tau) + ", beta = " + g(p.beta) + ", theta = " + g(p.theta) + ".\n\n";
    out += "- Internal energy, factor 2: -d ln Z/d beta by central differences = " + g(U_fd) +
           "; (1 - theta/D)/(2 beta) = " + g(U) + "; the reference first form (1 - theta/D)/beta = " + g(U_first) +
           "; the reference second form = " + g(U_second) + ". The two reference forms differ by exactly 2 and the "
           "second one is correct.\n";
    const double Cv = thermo::specific_heat(p, 1.0);
    out += "- Specific heat: k_B beta^2 d^2 ln Z/d beta^2 = " + g(Cv) +
           ". The reference final expression equals U/beta = " + g(U_second / p.beta) +
           " (it drops the beta^2 factor and the beta dependence of theta).\n";
    const double Z = thermo::partition_integral(p);
    const double Z_printed = std::sqrt(std::numbers::pi) / (2 * std::sqrt(p.beta)) * erfi;
    out += "- Partition prefactor: gamma = tau/sqrt(beta) gives Z = " + g(Z) +
           "; the reference closed form drops tau and gives " + g(Z_printed) +
           ". U and Cv do not see a constant factor; F and S shift by -ln(tau)/beta = " +
           g(-std::log(p.tau) / p.beta) + " and k_B ln(tau) = " + g(std::log(p.tau)) + ".\n";
    const double w_exact = std::sqrt(2.0 * s.mass.a() / (p.beta * s.constants.hbar2()));
    out += "- Matching the weight exp(beta hbar^2 (n - zeta)^2 / 2a) to exp([(n - zeta)/gamma]^2) needs gamma = "
           "sqrt(2a/(beta hbar^2)) = " + g(w_exact) + ", not tau/sqrt(beta) = " + g(p.gamma) +
           ". gamma = tau/sqrt(beta) is kept as given.\n";
    const double Zs = thermo::partition_direct_sum(p.zeta, p.gamma);
    out += "- High-temperature reduction: direct sum " + g(Zs) + " against the integral " + g(Z) + ", relative gap " +
           g(std::fabs(Zs - Z) / Zs, 4) + " (zeta is small here, so the integral is a poor stand-in).\n";
    out += "- Dropped factor exp(-beta (hbar^2 delta^2/2a + 3 hbar^2/8a - 2(V1 + V2))) = " +
           g(std::exp(-p.beta * spectra::inverse_square_offset(s))) + ", not close to 1 at this temperature.\n";
  } catch (const Error& e) {
    out += "Thermo reference point failed: " + std::string(e.what()) + "\n";
  }
  out += "\nSum against integral for large zeta at theta = 1 (gamma = zeta/theta):\n\n";
  out += "| zeta | theta | Z sum | Z integral | rel gap |\n|---|---|---|---|---|\n";
  for (double zeta : {20.0, 21.0, 22.0, 24.0, 25.0, 30.0, 40.0}) {
    const double theta = 1.0;
    const double gamma = zeta / theta;
    const double Zs = thermo::partition_direct_sum(zeta, gamma);
    const double Zi = gamma * 0.5 * std::sqrt(std::numbers::pi) * special::erfi(theta).value;
    out += "| " + g(zeta) + " | " + g(theta) + " | " + g(Zs) + " | " + g(Zi) + " | " + g(std::fabs(Zs - Zi) / Zs, 4) +
           " |\n";
  }
  out += "\nThe sum counts both endpoints with full weight, so the gap is close to (e^{theta^2} + 1)/(2 Z) and falls "
         "only like 1/zeta. At theta = 1 it stays above 5% up to zeta of about 24.5.\n\n";
  return out;
}

inline std::string section_oracle() {
  std::string out = "## ode-oracle\n\n";
  out += "Shooting eigenvalues of the coefficient equations against the closed-form and root-found levels. Gaps are "
         "reported, not asserted.\n\n";
  oracle::ComparisonSettings cfg;
  detail::comparison_table(out, "Exponential mass, a = 0.1, reference condition", detail::exp_defaults(0.1),
                           oracle::FormulaKind::exponential_condition, cfg);
  detail::comparison_table(out, "Exponential mass, a = 0.1, D3 = 2n condition", detail::exp_defaults(0.1),
                           oracle::FormulaKind::derived_condition, cfg);
  auto full = cfg;
  full.form = oracle::OdeForm::full;
  detail::comparison_table(out, "Exponential mass, a = 0.1, unexpanded radial equation", detail::exp_defaults(0.1),
                           oracle::FormulaKind::exponential_condition, full);
  detail::comparison_table(out, "Inverse-square mass, defaults of the lambda sweep", detail::inv_defaults(),
                           oracle::FormulaKind::inverse_square_closed_form, cfg);
  auto neg = detail::inv_defaults();
  neg.quantum.m = -4;
  detail::comparison_table(out, "Inverse-square mass, m = -4", neg, oracle::FormulaKind::inverse_square_closed_form,
                           cfg);
  out += "For the inverse-square mass E only enters the 1/rho^2 coefficient. With m = 0 the constant coefficient is "
         "negative and the expanded equation has no bound state in the window; shifting delta negative produces levels, "
         "and they sit where 1 - eta2(E) is small, not at the closed-form values.\n\n";
  return out;
}

inline std::string section_figures(unsigned threads) {
  std::string out = "## figures\n\n";
  out += "Trend verdicts on the default datasets (40 points per curve).\n\n";
  out += "| claim | statement | verdict | detail |\n|---|---|---|---|\n";
  std::vector<figures::ClaimResult> flagged;
  for (int id = 1; id <= figures::figure_count; ++id) {
    const auto r = figures::run_figure(id, threads);
    for (const auto& v : r.verdicts) {
      out += "| " + v.claim.id + " | " + v.claim.statement + " | " + std::string(to_string(v.verdict)) + " | " +
             v.detail + " |\n";
      if (v.verdict != figures::Verdict::consistent) flagged.push_back(v);
    }
  }
  out += "\nNot confirmed by the computed data:\n\n";
  if (flagged.empty()) out += "- none\n";
  for (const auto& v : flagged) {
    out += "- `" + v.claim.id + "` (" + std::string(to_string(v.verdict)) + "): " + v.claim.statement + "\n";
  }
  out += "\n";
  return out;
}

/// Full report. Deterministic for a given build.
inline std::string build(unsigned threads = 1) {
  std::string out = "# Discrepancies\n\n";
  out += "Generated by `pdm_spectra report`. Natural units (hbar = e = c = m0 = k_B = 1). Each section lists where "
         "the reference formulas disagree with a re-derivation, an identity check or the shooting oracle, with "
         "numbers.\n\n";
  out += section_special_functions();
  out += section_radial_model();
  out += section_heun();
  out += section_spectra();
  out += section_thermo();
  out += section_oracle();
  out += section_figures(threads);
  return out;
}

}  // namespace pdm::report

#endif  // PDM_REPORT_HPP
