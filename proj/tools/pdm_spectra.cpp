// pdm_spectra: energy levels, sweeps, figure datasets, thermodynamic tables,
// oracle comparisons and the discrepancy report.
//
// exit codes: 0 ok, 2 usage or config error, 3 computation error (JSON on stderr)

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdm/config.hpp"
#include "pdm/figures.hpp"
#include "pdm/heun_series.hpp"
#include "pdm/ode_oracle.hpp"
#include "pdm/report.hpp"
#include "pdm/spectra.hpp"
#include "pdm/thermo.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::string> mass_case;
  std::optional<double> a, V1, V2, V3, lambda, B, Phi;
  std::optional<int> n, m;
  std::optional<double> E_lo, E_hi;
  std::optional<int> n_grid;
  std::optional<std::string> mode;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output path (stdout when omitted; a directory for `figure`)");
  cmd->add_option("--case", o.mass_case, "mass case")->check(CLI::IsMember({"exponential", "inverse-square"}));
  cmd->add_option("--a", o.a, "mass parameter a");
  cmd->add_option("--V1", o.V1);
  cmd->add_option("--V2", o.V2);
  cmd->add_option("--V3", o.V3);
  cmd->add_option("--lambda", o.lambda, "potential range parameter");
  cmd->add_option("--B", o.B, "magnetic field");
  cmd->add_option("--Phi", o.Phi, "Aharonov-Bohm flux");
  cmd->add_option("--n", o.n, "radial quantum number");
  cmd->add_option("--m", o.m, "magnetic quantum number");
  cmd->add_option("--E-lo", o.E_lo, "lower end of the energy window");
  cmd->add_option("--E-hi", o.E_hi, "upper end of the energy window");
  cmd->add_option("--n-grid", o.n_grid, "scan intervals");
  cmd->add_option("--mode", o.mode, "exponential-mass condition")->check(CLI::IsMember({"reference", "derived"}));
}

// Defaults used by thermo when neither --config nor --case is given.
pdm::RunConfig thermo_defaults() {
  pdm::RunConfig c;
  c.system.mass = pdm::MassCase::inverse_square(1.0);
  c.system.potential = {0.01, 0.01, 0.0, 1.0};
  c.system.fields = {1.0, 1.0};
  c.system.quantum = {0, 0};
  return c;
}

pdm::RunConfig assemble(const Overrides& o, pdm::RunConfig base) {
  pdm::RunConfig c = o.config.empty() ? std::move(base) : pdm::load_config(o.config);
  auto& s = c.system;
  if (o.mass_case || o.a) {
    const auto kind = o.mass_case ? pdm::parse_mass_kind(*o.mass_case) : s.mass.kind();
    double a = o.a.value_or(s.mass.a());
    if (kind == pdm::MassKind::inverse_square && a == 0.0) a = 1.0;
    s.mass = pdm::MassCase::make(kind, a);
    if (kind == pdm::MassKind::inverse_square && !o.V3) s.potential.V3 = 0.0;
  }
  if (o.V1) s.potential.V1 = *o.V1;
  if (o.V2) s.potential.V2 = *o.V2;
  if (o.V3) s.potential.V3 = *o.V3;
  if (o.lambda) s.potential.lambda = *o.lambda;
  if (o.B) s.fields.B = *o.B;
  if (o.Phi) s.fields.Phi_AB = *o.Phi;
  if (o.n) s.quantum.n = *o.n;
  if (o.m) s.quantum.m = *o.m;
  if (o.E_lo) c.window.E_lo = *o.E_lo;
  if (o.E_hi) c.window.E_hi = *o.E_hi;
  if (o.n_grid) c.window.n_grid = *o.n_grid;
  if (o.mode) c.mode = pdm::config_detail::parse_mode(*o.mode);
  if (!o.out.empty()) c.output = o.out;
  s.validate();
  return c;
}

// Writes to a sibling temp file and renames it into place.
void write_atomic(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw pdm::Error(pdm::ErrorKind::argument, "cannot write '" + tmp.string() + "'");
    f << data;
    if (!f.flush()) throw pdm::Error(pdm::ErrorKind::argument, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

std::string levels_csv(const std::vector<pdm::spectra::EnergyLevel>& levels) {
  using pdm::csv::num;
  std::string out = "E,n,m,residual,method,bracket_lo,bracket_hi,iterations\n";
  for (const auto& l : levels) {
    out += pdm::csv::row({num(l.E), num(l.n), num(l.m), num(l.residual), pdm::spectra::to_string(l.method),
                          l.bracket ? num(l.bracket->lo) : "nan", l.bracket ? num(l.bracket->hi) : "nan",
                          num(l.iterations)});
  }
  return out;
}

// R(rho) of the lowest level from the series, rho in (0, rho_max].
std::string wavefunction_csv(const pdm::SystemParams& s, double E, double rho_max, int points) {
  const auto reduced = pdm::reduce(pdm::eta_for(E, s), s.mass);
  const auto scaled = pdm::scale(reduced);
  const double chi_max = std::pow(reduced.eps, 0.25) * rho_max;
  const auto series = pdm::heun::build_series_for(scaled, chi_max);
  std::string out = "rho,R\n";
  for (int i = 1; i <= points; ++i) {
    const double rho = rho_max * i / points;
    out += pdm::csv::row({pdm::csv::num(rho), pdm::csv::num(pdm::heun::assemble_radial(rho, series, s.mass, reduced))});
  }
  return out;
}

int fail(const pdm::Error& e) {
  nlohmann::ordered_json j;
  j["error"] = std::string(pdm::to_string(e.kind()));
  j["message"] = e.what();
  std::cerr << j.dump() << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-dependent-mass spectra, thermodynamics and consistency checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Overrides o;
  std::string wavefunction;
  double rho_max = 10.0;
  auto* solve = app.add_subcommand("solve", "energy levels of one configuration");
  add_common(solve, o);
  solve->add_option("--wavefunction", wavefunction, "also write R(rho) of the lowest level to this CSV");
  solve->add_option("--rho-max", rho_max, "radial extent of --wavefunction")->check(CLI::PositiveNumber);

  std::string vary;
  std::optional<double> lo, hi;
  std::optional<int> steps;
  auto* sweep = app.add_subcommand("sweep", "lowest level over a parameter range");
  add_common(sweep, o);
  sweep->add_option("--vary", vary, "a | lambda | B | Phi")->required();
  sweep->add_option("--lo", lo);
  sweep->add_option("--hi", hi);
  sweep->add_option("--steps", steps);

  int fig_id = 0;
  int points = pdm::figures::default_points;
  auto* figure = app.add_subcommand("figure", "curve datasets and trend verdicts for figure 1..12");
  add_common(figure, o);
  figure->add_option("--id", fig_id, "figure number")->required()->check(CLI::Range(1, pdm::figures::figure_count));
  figure->add_option("--points", points, "points per curve")->check(CLI::Range(3, 100000));

  std::optional<double> T_lo, T_hi;
  std::optional<int> T_steps;
  auto* thermo = app.add_subcommand("thermo", "thermodynamic table over temperature (inverse-square mass)");
  add_common(thermo, o);
  thermo->add_option("--T-lo", T_lo);
  thermo->add_option("--T-hi", T_hi);
  thermo->add_option("--steps", T_steps);

  std::string which = "exponential-condition";
  std::optional<int> max_states;
  std::optional<std::string> form;
  auto* oracle = app.add_subcommand("oracle", "shooting eigenvalues against a closed form");
  add_common(oracle, o);
  oracle->add_option("--which", which)
      ->check(CLI::IsMember({"exponential-condition", "inverse-square-closed-form", "derived-condition"}));
  oracle->add_option("--max-states", max_states);
  oracle->add_option("--form", form)->check(CLI::IsMember({"expanded", "full"}));

  auto* report = app.add_subcommand("report", "write DISCREPANCIES.md");
  report->add_option("--out", o.out, "output path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0 && e.get_exit_code() != 0) std::cerr << app.help();
    return code == 0 ? 0 : 2;
  }

  const unsigned threads = pdm::threads_from_env();

  pdm::RunConfig cfg;
  try {
    if (solve->parsed() && o.config.empty() && !o.mass_case) {
      throw UsageError("solve needs --case or --config");
    }
    if (!report->parsed()) {
      const bool thermo_default = thermo->parsed() && o.config.empty() && !o.mass_case;
      cfg = assemble(o, thermo_default ? thermo_defaults() : pdm::RunConfig{});
    }
    if (lo) cfg.sweep_lo = *lo;
    if (hi) cfg.sweep_hi = *hi;
    if (steps) cfg.sweep_steps = *steps;
    if (!vary.empty()) cfg.vary = pdm::spectra::parse_sweep_var(vary);
    if (T_lo) cfg.thermo.T_lo = *T_lo;
    if (T_hi) cfg.thermo.T_hi = *T_hi;
    if (T_steps) cfg.thermo.steps = *T_steps;
    if (max_states) cfg.oracle.max_states = *max_states;
    if (o.E_lo) cfg.oracle.E_lo = *o.E_lo;
    if (o.E_hi) cfg.oracle.E_hi = *o.E_hi;
    if (form) cfg.oracle.form = pdm::config_detail::parse_form(*form);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const pdm::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (solve->parsed()) {
      std::vector<pdm::spectra::EnergyLevel> levels;
      if (cfg.system.mass.kind() == pdm::MassKind::inverse_square) {
        levels.push_back(pdm::spectra::energy_inverse_square(cfg.system));
      } else {
        const auto res = pdm::spectra::solve_energy_exponential(cfg.system, cfg.window, cfg.mode);
        for (const auto& n : res.notes) std::cerr << "note: " << n << "\n";
        levels = res.levels;
      }
      write_atomic(cfg.output, levels_csv(levels));
      if (!wavefunction.empty()) {
        if (levels.empty()) throw pdm::Error(pdm::ErrorKind::domain, "no level to build a wave function for");
        write_atomic(wavefunction, wavefunction_csv(cfg.system, levels.front().E, rho_max, 200));
      }
    } else if (sweep->parsed()) {
      if (cfg.vary == pdm::spectra::SweepVar::T) {
        throw pdm::Error(pdm::ErrorKind::argument, "temperature does not enter the spectrum; use `thermo`");
      }
      write_atomic(cfg.output, pdm::spectra::sweep_csv(pdm::spectra::sweep(cfg.sweep_spec(), threads)));
    } else if (figure->parsed()) {
      auto spec = pdm::figures::figure_spec(fig_id);
      spec.points = points;
      const auto res = pdm::figures::run_figure(spec, threads);
      const std::filesystem::path dir = cfg.output.empty() ? "." : cfg.output;
      for (const auto& c : res.curves) {
        write_atomic((dir / pdm::figures::curve_file_name(fig_id, c)).string(), pdm::figures::curve_csv(spec, c));
      }
      write_atomic((dir / pdm::figures::verdict_file_name(fig_id)).string(),
                   pdm::figures::verdicts_json(res).dump(2) + "\n");
    } else if (thermo->parsed()) {
      const auto rows =
          pdm::thermo::temperature_table(cfg.system, cfg.thermo.T_lo, cfg.thermo.T_hi, cfg.thermo.steps, threads);
      write_atomic(cfg.output, pdm::thermo::thermo_csv(rows));
    } else if (oracle->parsed()) {
      const auto kind = which == "exponential-condition"       ? pdm::oracle::FormulaKind::exponential_condition
                        : which == "inverse-square-closed-form" ? pdm::oracle::FormulaKind::inverse_square_closed_form
                                                                : pdm::oracle::FormulaKind::derived_condition;
      cfg.oracle.formula_window = cfg.window;
      const auto rep = pdm::oracle::compare_with_closed_form(cfg.system, kind, cfg.oracle);
      for (const auto& n : rep.notes) std::cerr << "note: " << n << "\n";
      write_atomic(cfg.output, pdm::oracle::comparison_csv(rep));
    } else if (report->parsed()) {
      write_atomic(o.out.empty() ? "DISCREPANCIES.md" : o.out, pdm::report::build(threads));
    }
  } catch (const pdm::Error& e) {
    return fail(e);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(pdm::Error(pdm::ErrorKind::argument, e.what()));
  }
  return 0;
}
