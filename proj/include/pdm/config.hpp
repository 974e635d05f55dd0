#ifndef PDM_CONFIG_HPP
#define PDM_CONFIG_HPP

// JSON run configuration. Every field is optional on input; absent fields keep
// the defaults below (the exponential-mass parameter set of figure 1).
//
// {
//   "units": "natural",
//   "mass": {"case": "exponential", "a": 0.5},
//   "potential": {"V1": 0.5, "V2": 0.5, "V3": 0.5, "lambda": 0.1},
//   "fields": {"B": 1, "Phi_AB": 1},
//   "quantum": {"n": 1, "m": 0},
//   "constants": {"hbar": 1, "e": 1, "c": 1, "m0": 1, "k_B": 1},
//   "solver": {"E_lo": -50, "E_hi": 50, "n_grid": 400, "mode": "reference"},
//   "sweep": {"vary": "a", "lo": 0.1, "hi": 2, "steps": 20},
//   "thermo": {"T_lo": 0.5, "T_hi": 10, "steps": 20},
//   "oracle": {"E_lo": -20, "E_hi": 20, "max_states": 4, "form": "expanded"},
//   "output": "out.csv"
// }

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "ode_oracle.hpp"
#include "radial_model.hpp"
#include "spectra.hpp"

namespace pdm {

struct ThermoGrid {
  double T_lo = 0.5;
  double T_hi = 10.0;
  int steps = 20;
};

struct RunConfig {
  SystemParams system;
  spectra::ScanWindow window;
  spectra::ExponentialMode mode = spectra::ExponentialMode::reference_condition;
  spectra::SweepVar vary = spectra::SweepVar::a;
  double sweep_lo = 0.1;
  double sweep_hi = 2.0;
  int sweep_steps = 20;
  ThermoGrid thermo;
  oracle::ComparisonSettings oracle;
  std::string output;

  RunConfig() {
    system.mass = MassCase::exponential(0.5);
    system.potential = {0.5, 0.5, 0.5, 0.1};
    system.fields = {1.0, 1.0};
    system.quantum = {1, 0};
  }

  spectra::SweepSpec sweep_spec() const {
    spectra::SweepSpec s;
    s.vary = vary;
    s.lo = sweep_lo;
    s.hi = sweep_hi;
    s.steps = sweep_steps;
    s.fixed = system;
    s.window = window;
    s.mode = mode;
    return s;
  }
};

namespace config_detail {

using nlohmann::json;

inline void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw Error(ErrorKind::argument, std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (auto key : keys) known = known || k == key;
    if (!known) throw Error(ErrorKind::argument, "unknown key '" + k + "' in " + std::string(where));
  }
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::argument, std::string("bad value for '") + key + "': " + e.what());
  }
}

inline spectra::ExponentialMode parse_mode(std::string_view s) {
  if (s == "reference") return spectra::ExponentialMode::reference_condition;
  if (s == "derived") return spectra::ExponentialMode::derived_condition;
  throw Error(ErrorKind::argument, "mode must be 'reference' or 'derived'");
}

inline oracle::OdeForm parse_form(std::string_view s) {
  if (s == "expanded") return oracle::OdeForm::expanded;
  if (s == "full") return oracle::OdeForm::full;
  throw Error(ErrorKind::argument, "oracle form must be 'expanded' or 'full'");
}

}  // namespace config_detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  using namespace config_detail;
  RunConfig c;
  check_keys(j, "config", {"units", "mass", "potential", "fields", "quantum", "constants", "solver",
                           "sweep", "thermo", "oracle", "output"});
  if (j.contains("units") && j["units"] != "natural") {
    throw Error(ErrorKind::argument, "only natural units are supported; scale constants instead");
  }
  if (j.contains("mass")) {
    const auto& m = j["mass"];
    check_keys(m, "mass", {"case", "a"});
    std::string kind(to_string(c.system.mass.kind()));
    double a = c.system.mass.a();
    get(m, "case", kind);
    get(m, "a", a);
    c.system.mass = MassCase::make(parse_mass_kind(kind), a);
  }
  if (j.contains("potential")) {
    const auto& p = j["potential"];
    check_keys(p, "potential", {"V1", "V2", "V3", "lambda"});
    get(p, "V1", c.system.potential.V1);
    get(p, "V2", c.system.potential.V2);
    get(p, "V3", c.system.potential.V3);
    get(p, "lambda", c.system.potential.lambda);
  }
  if (j.contains("fields")) {
    const auto& f = j["fields"];
    check_keys(f, "fields", {"B", "Phi_AB"});
    get(f, "B", c.system.fields.B);
    get(f, "Phi_AB", c.system.fields.Phi_AB);
  }
  if (j.contains("quantum")) {
    const auto& q = j["quantum"];
    check_keys(q, "quantum", {"n", "m"});
    get(q, "n", c.system.quantum.n);
    get(q, "m", c.system.quantum.m);
  }
  if (j.contains("constants")) {
    const auto& k = j["constants"];
    check_keys(k, "constants", {"hbar", "e", "c", "m0", "k_B"});
    get(k, "hbar", c.system.constants.hbar);
    get(k, "e", c.system.constants.e_charge);
    get(k, "c", c.system.constants.c_light);
    get(k, "m0", c.system.constants.m0);
    get(k, "k_B", c.system.constants.k_B);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    check_keys(s, "solver", {"E_lo", "E_hi", "n_grid", "mode"});
    get(s, "E_lo", c.window.E_lo);
    get(s, "E_hi", c.window.E_hi);
    get(s, "n_grid", c.window.n_grid);
    std::string mode(to_string(c.mode));
    get(s, "mode", mode);
    c.mode = parse_mode(mode);
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, "sweep", {"vary", "lo", "hi", "steps"});
    std::string vary(to_string(c.vary));
    get(s, "vary", vary);
    c.vary = spectra::parse_sweep_var(vary);
    get(s, "lo", c.sweep_lo);
    get(s, "hi", c.sweep_hi);
    get(s, "steps", c.sweep_steps);
  }
  if (j.contains("thermo")) {
    const auto& t = j["thermo"];
    check_keys(t, "thermo", {"T_lo", "T_hi", "steps"});
    get(t, "T_lo", c.thermo.T_lo);
    get(t, "T_hi", c.thermo.T_hi);
    get(t, "steps", c.thermo.steps);
  }
  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    check_keys(o, "oracle", {"E_lo", "E_hi", "max_states", "form"});
    get(o, "E_lo", c.oracle.E_lo);
    get(o, "E_hi", c.oracle.E_hi);
    get(o, "max_states", c.oracle.max_states);
    std::string form = c.oracle.form == oracle::OdeForm::expanded ? "expanded" : "full";
    get(o, "form", form);
    c.oracle.form = parse_form(form);
  }
  get(j, "output", c.output);
  return c;
}

inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  const auto& s = c.system;
  j["units"] = "natural";
  j["mass"] = {{"case", std::string(to_string(s.mass.kind()))}, {"a", s.mass.a()}};
  j["potential"] = {{"V1", s.potential.V1}, {"V2", s.potential.V2}, {"V3", s.potential.V3},
                    {"lambda", s.potential.lambda}};
  j["fields"] = {{"B", s.fields.B}, {"Phi_AB", s.fields.Phi_AB}};
  j["quantum"] = {{"n", s.quantum.n}, {"m", s.quantum.m}};
  j["constants"] = {{"hbar", s.constants.hbar}, {"e", s.constants.e_charge}, {"c", s.constants.c_light},
                    {"m0", s.constants.m0}, {"k_B", s.constants.k_B}};
  j["solver"] = {{"E_lo", c.window.E_lo}, {"E_hi", c.window.E_hi}, {"n_grid", c.window.n_grid},
                 {"mode", std::string(to_string(c.mode))}};
  j["sweep"] = {{"vary", std::string(to_string(c.vary))}, {"lo", c.sweep_lo}, {"hi", c.sweep_hi},
                {"steps", c.sweep_steps}};
  j["thermo"] = {{"T_lo", c.thermo.T_lo}, {"T_hi", c.thermo.T_hi}, {"steps", c.thermo.steps}};
  j["oracle"] = {{"E_lo", c.oracle.E_lo}, {"E_hi", c.oracle.E_hi}, {"max_states", c.oracle.max_states},
                 {"form", c.oracle.form == oracle::OdeForm::expanded ? "expanded" : "full"}};
  j["output"] = c.output;
  return j;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::argument, "cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::argument, "malformed config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace pdm

#endif  // PDM_CONFIG_HPP
