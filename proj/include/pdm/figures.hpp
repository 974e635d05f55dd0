#ifndef PDM_FIGURES_HPP
#define PDM_FIGURES_HPP

// Datasets behind the twelve reference figures and a monotonicity verdict for
// every trend statement attached to them.
//
// Defaults (natural units, axis ranges are choices; the source figures carry no
// readable scales):
//
//   id  case            x       range        fixed                                   curves
//    1  exponential     a       [0.1, 2]     V1=V2=V3=0.5 lambda=0.1 n=1 m=0         (B,Phi) = (1,1) (2,1) (1,2) (1,3)
//    2  exponential     lambda  [0.1, 2]     as 1, a=0.5                             B = 1,3,5 @Phi=1; Phi = 1,12,14 @B=1
//    3  exponential     B       [0.5, 5]     as 1, Phi=1                             a = 0, 0.1, 0.2
//    4  exponential     Phi     [0.5, 5]     as 1, B=1                               a = 0, 0.1, 0.2
//    5  inverse-square  lambda  [0.1, 2]     V1=V2=0.01 a=1 n=1 m=0                  (B,Phi) = (2,2) (2.4,2) (2,2.4)
//    6  inverse-square  a       [0.5, 3]     as 5, lambda=1                          as 5; V1 = 0.01, 0.05 @B=Phi=2
//    7  thermo U        T       [0.5, 10]    V1=V2=0.01 lambda=1 B=Phi=1 m=0         a = 1, 1.2
//    8  thermo U        T       [0.5, 10]    as 7, a=1                               B = 1, 10
//    9  thermo U        a       [0.5, 3]     as 7, T=2                               B = 1, 10
//   10  thermo Cv       a       [0.5, 3]     as 7, T=2                               B = 1, 5
//   11  thermo Cv       T       [0.5, 10]    as 7                                    (a,B) = (1,1) (1.2,1) (1,5)
//   12  thermo S        a       [0.5, 3]     as 7                                    (B,T) = (1,1) (5,1) (1,2)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "radial_model.hpp"
#include "spectra.hpp"
#include "thermo.hpp"

#include <json.hpp>

namespace pdm::figures {

inline constexpr int figure_count = 12;
inline constexpr int default_points = 40;
/// Coefficient of determination at or above which a curve counts as linear.
inline constexpr double linearity_r2 = 0.999;

enum class Quantity { E, U, Cv, S };

inline std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::E: return "E";
    case Quantity::U: return "U";
    case Quantity::Cv: return "Cv";
    case Quantity::S: return "S";
  }
  return "?";
}

struct CurveSpec {
  std::string label;  // file-name safe
  SystemParams params;
  double T = 2.0;  // thermo curves vs a
};

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<std::optional<double>> y;
  std::vector<std::string> status;
  SystemParams params;
  double T = 0;
};

enum class Verdict { consistent, contradicted, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::contradicted: return "contradicted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

enum class ClaimKind { increasing_in_x, decreasing_in_x, linear_in_x, ordered_curves };

/// One trend statement. For ordered_curves, every pair (lo, hi) of curve
/// indices is expected to satisfy y[hi] > y[lo] pointwise.
struct Claim {
  std::string id;
  std::string statement;
  ClaimKind kind = ClaimKind::increasing_in_x;
  std::vector<int> curves;                 // x-trend claims
  std::vector<std::pair<int, int>> order;  // ordered_curves
};

struct ClaimResult {
  Claim claim;
  Verdict verdict = Verdict::inconclusive;
  std::string detail;
};

struct FigureSpec {
  int id = 0;
  std::string title;
  Quantity y = Quantity::E;
  spectra::SweepVar x = spectra::SweepVar::a;
  double lo = 0, hi = 1;
  int points = default_points;
  std::vector<CurveSpec> curves;
  std::vector<Claim> claims;
};

struct FigureResult {
  FigureSpec spec;
  std::vector<Curve> curves;
  std::vector<ClaimResult> verdicts;
};

namespace detail {

inline SystemParams exp_base() {
  SystemParams s;
  s.mass = MassCase::exponential(0.5);
  s.potential = {0.5, 0.5, 0.5, 0.1};
  s.fields = {1.0, 1.0};
  s.quantum = {1, 0};
  return s;
}

inline SystemParams inv_base() {
  SystemParams s;
  s.mass = MassCase::inverse_square(1.0);
  s.potential = {0.01, 0.01, 0.0, 1.0};
  s.fields = {2.0, 2.0};
  s.quantum = {1, 0};
  return s;
}

inline SystemParams thermo_base() {
  SystemParams s;
  s.mass = MassCase::inverse_square(1.0);
  s.potential = {0.01, 0.01, 0.0, 1.0};
  s.fields = {1.0, 1.0};
  s.quantum = {0, 0};
  return s;
}

inline std::string tag(std::string_view name, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  std::string s = buf;
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '-', 'm');
  return std::string(name) + s;
}

inline CurveSpec curve(SystemParams p, std::vector<std::pair<std::string_view, double>> tags,
                       double T = 2.0) {
  std::string label;
  for (const auto& [k, v] : tags) {
    if (!label.empty()) label += '_';
    label += tag(k, v);
  }
  return {label, std::move(p), T};
}

inline SystemParams with_a(SystemParams p, double a) {
  p.mass = MassCase::make(p.mass.kind(), a);
  return p;
}
inline SystemParams with_B(SystemParams p, double B, double Phi) {
  p.fields = {B, Phi};
  return p;
}

inline Claim up(std::string id, std::string text, std::vector<int> c) {
  return {std::move(id), std::move(text), ClaimKind::increasing_in_x, std::move(c), {}};
}
inline Claim down(std::string id, std::string text, std::vector<int> c) {
  return {std::move(id), std::move(text), ClaimKind::decreasing_in_x, std::move(c), {}};
}
inline Claim linear(std::string id, std::string text, std::vector<int> c) {
  return {std::move(id), std::move(text), ClaimKind::linear_in_x, std::move(c), {}};
}
inline Claim order(std::string id, std::string text, std::vector<std::pair<int, int>> o) {
  return {std::move(id), std::move(text), ClaimKind::ordered_curves, {}, std::move(o)};
}

}  // namespace detail

inline FigureSpec figure_spec(int id) {
  using namespace detail;
  using spectra::SweepVar;
  FigureSpec f;
  f.id = id;
  switch (id) {
    case 1: {
      f.title = "energy vs a, exponential mass";
      f.x = SweepVar::a, f.lo = 0.1, f.hi = 2.0;
      const auto b = exp_base();
      for (auto [B, Phi] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}) {
        f.curves.push_back(curve(with_B(b, B, Phi), {{"B", B}, {"Phi", Phi}}));
      }
      f.claims = {up("fig1-a", "energy grows with a", {0, 1, 2, 3}),
                  order("fig1-B", "at fixed a a stronger field B lowers the energy", {{1, 0}}),
                  order("fig1-Phi", "at fixed a a larger flux lowers the energy", {{2, 0}, {3, 2}})};
      break;
    }
    case 2: {
      f.title = "energy vs lambda, exponential mass";
      f.x = SweepVar::lambda, f.lo = 0.1, f.hi = 2.0;
      const auto b = with_a(exp_base(), 0.5);
      for (double B : {1.0, 3.0, 5.0}) f.curves.push_back(curve(with_B(b, B, 1.0), {{"B", B}, {"Phi", 1.0}}));
      for (double Phi : {12.0, 14.0}) f.curves.push_back(curve(with_B(b, 1.0, Phi), {{"B", 1.0}, {"Phi", Phi}}));
      f.claims = {linear("fig2-linear", "energy is a straight line in lambda", {0, 1, 2, 3, 4}),
                  order("fig2-B", "larger B gives lower energy", {{1, 0}, {2, 1}}),
                  order("fig2-Phi", "larger flux gives lower energy", {{3, 0}, {4, 3}})};
      break;
    }
    case 3:
    case 4: {
      const bool vs_B = id == 3;
      f.title = vs_B ? "energy vs B, exponential mass" : "energy vs flux, exponential mass";
      f.x = vs_B ? SweepVar::B : SweepVar::Phi_AB, f.lo = 0.5, f.hi = 5.0;
      for (double a : {0.0, 0.1, 0.2}) f.curves.push_back(curve(with_a(exp_base(), a), {{"a", a}}));
      const std::string v = vs_B ? "B" : "the flux";
      const std::string p = vs_B ? "fig3" : "fig4";
      f.claims = {up(p + "-up", "energy grows with " + v, {0, 1, 2}),
                  linear(p + "-linear", "energy is a straight line in " + v, {0, 1, 2}),
                  order(p + "-a", "larger a gives lower energy", {{1, 0}, {2, 1}})};
      break;
    }
    case 5: {
      f.title = "energy vs lambda, inverse-square mass";
      f.x = SweepVar::lambda, f.lo = 0.1, f.hi = 2.0;
      for (auto [B, Phi] : {std::pair{2.0, 2.0}, {2.4, 2.0}, {2.0, 2.4}}) {
        f.curves.push_back(curve(with_B(inv_base(), B, Phi), {{"B", B}, {"Phi", Phi}}));
      }
      f.claims = {up("fig5-lambda", "energy grows with lambda", {0, 1, 2}),
                  order("fig5-B", "larger B gives lower energy", {{1, 0}}),
                  order("fig5-Phi", "larger flux gives higher energy", {{0, 2}})};
      break;
    }
    case 6: {
      f.title = "energy vs a, inverse-square mass";
      f.x = SweepVar::a, f.lo = 0.5, f.hi = 3.0;
      for (auto [B, Phi] : {std::pair{2.0, 2.0}, {2.4, 2.0}, {2.0, 2.4}}) {
        f.curves.push_back(curve(with_B(inv_base(), B, Phi), {{"B", B}, {"Phi", Phi}, {"V1", 0.01}}));
      }
      auto v = inv_base();
      v.potential.V1 = 0.05;
      f.curves.push_back(curve(v, {{"B", 2.0}, {"Phi", 2.0}, {"V1", 0.05}}));
      f.claims = {down("fig6-a", "energy falls with a", {0, 1, 2, 3}),
                  order("fig6-B", "larger B gives lower energy", {{1, 0}}),
                  order("fig6-Phi", "larger flux gives higher energy", {{0, 2}}),
                  order("fig6-V1", "larger V1 gives higher energy", {{0, 3}})};
      break;
    }
    case 7:
    case 8: {
      f.y = Quantity::U;
      f.title = id == 7 ? "internal energy vs T, varying a" : "internal energy vs T, varying B";
      f.x = SweepVar::T, f.lo = 0.5, f.hi = 10.0;
      if (id == 7) {
        for (double a : {1.0, 1.2}) f.curves.push_back(curve(with_a(thermo_base(), a), {{"a", a}}));
        f.claims = {up("fig7-T", "U grows with T", {0, 1}),
                    order("fig7-a", "larger a gives higher U", {{0, 1}})};
      } else {
        for (double B : {1.0, 10.0}) f.curves.push_back(curve(with_B(thermo_base(), B, 1.0), {{"B", B}}));
        f.claims = {up("fig8-T", "U grows with T", {0, 1}),
                    order("fig8-B", "larger B gives lower U", {{1, 0}})};
      }
      break;
    }
    case 9:
    case 10: {
      f.y = id == 9 ? Quantity::U : Quantity::Cv;
      f.title = id == 9 ? "internal energy vs a" : "specific heat vs a";
      f.x = SweepVar::a, f.lo = 0.5, f.hi = 3.0;
      const double B2 = id == 9 ? 10.0 : 5.0;
      for (double B : {1.0, B2}) f.curves.push_back(curve(with_B(thermo_base(), B, 1.0), {{"B", B}}, 2.0));
      if (id == 9) {
        f.claims = {up("fig9-a", "U grows with a", {0, 1}),
                    order("fig9-B", "larger B gives lower U", {{1, 0}})};
      } else {
        f.claims = {down("fig10-a", "Cv falls with a", {0, 1}),
                    order("fig10-B", "larger B gives higher Cv", {{0, 1}})};
      }
      break;
    }
    case 11: {
      f.y = Quantity::Cv;
      f.title = "specific heat vs T";
      f.x = SweepVar::T, f.lo = 0.5, f.hi = 10.0;
      for (auto [a, B] : {std::pair{1.0, 1.0}, {1.2, 1.0}, {1.0, 5.0}}) {
        f.curves.push_back(curve(with_B(with_a(thermo_base(), a), B, 1.0), {{"a", a}, {"B", B}}));
      }
      f.claims = {up("fig11-T", "Cv grows with T", {0, 1, 2}),
                  order("fig11-B", "larger B gives higher Cv", {{0, 2}}),
                  order("fig11-a", "larger a gives lower Cv", {{1, 0}})};
      break;
    }
    case 12: {
      f.y = Quantity::S;
      f.title = "entropy vs a";
      f.x = SweepVar::a, f.lo = 0.5, f.hi = 3.0;
      for (auto [B, T] : {std::pair{1.0, 1.0}, {5.0, 1.0}, {1.0, 2.0}}) {
        f.curves.push_back(curve(with_B(thermo_base(), B, 1.0), {{"B", B}, {"T", T}}, T));
      }
      f.claims = {down("fig12-a", "S falls with a", {0, 1, 2}),
                  order("fig12-B", "larger B gives higher S", {{0, 1}}),
                  order("fig12-T", "higher T gives lower S", {{2, 0}})};
      break;
    }
    default:
      throw Error(ErrorKind::argument, "figure id must be in 1..12, got " + std::to_string(id));
  }
  return f;
}

// --- evaluation ---------------------------------------------------------------

inline double grid_point(const FigureSpec& f, int i) {
  return i + 1 == f.points ? f.hi : f.lo + (f.hi - f.lo) * i / (f.points - 1);
}

inline std::optional<double> thermo_value(Quantity q, const thermo::ThermoState& st) {
  switch (q) {
    case Quantity::U: return st.U;
    case Quantity::Cv: return st.Cv;
    case Quantity::S: return st.S;
    case Quantity::E: break;
  }
  return std::nullopt;
}

inline Curve evaluate_curve(const FigureSpec& f, const CurveSpec& cs, unsigned threads = 1) {
  Curve c;
  c.label = cs.label;
  c.params = cs.params;
  c.T = cs.T;
  const auto n = static_cast<std::size_t>(f.points);
  c.x.resize(n);
  c.y.resize(n);
  c.status.assign(n, "ok");
  parallel_for(n, threads, [&](std::size_t i) {
    const double x = grid_point(f, static_cast<int>(i));
    c.x[i] = x;
    try {
      if (f.y == Quantity::E) {
        const auto row = spectra::evaluate_point(spectra::with_value(cs.params, f.x, x), {},
                                                 spectra::ExponentialMode::reference_condition);
        c.y[i] = row.E;
        c.status[i] = row.status;
      } else {
        const double T = f.x == spectra::SweepVar::T ? x : cs.T;
        const auto st = thermo::evaluate_state(spectra::with_value(cs.params, f.x, x), T);
        c.y[i] = thermo_value(f.y, st);
        if (!st.high_t_valid) c.status[i] = "outside-high-T";
      }
    } catch (const Error& e) {
      c.status[i] = std::string(to_string(e.kind()));
    }
  });
  return c;
}

namespace detail {

struct SignTally {
  int positive = 0, negative = 0, zero = 0;

  void add(double d) { d > 0 ? ++positive : d < 0 ? ++negative : ++zero; }
  int total() const { return positive + negative + zero; }
  Verdict verdict() const {
    if (total() == 0) return Verdict::inconclusive;
    if (positive == total()) return Verdict::consistent;
    if (negative == total()) return Verdict::contradicted;
    return Verdict::inconclusive;
  }
  std::string describe() const {
    return std::to_string(positive) + " as claimed, " + std::to_string(negative) + " against, " +
           std::to_string(zero) + " tied";
  }
};

inline Verdict combine(const std::vector<Verdict>& vs) {
  if (vs.empty()) return Verdict::inconclusive;
  if (std::all_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::consistent; })) {
    return Verdict::consistent;
  }
  if (std::any_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::contradicted; })) {
    return Verdict::contradicted;
  }
  return Verdict::inconclusive;
}

// Valid (x, y) pairs of a curve.
inline std::vector<std::pair<double, double>> valid_points(const Curve& c) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    if (c.y[i] && std::isfinite(*c.y[i])) out.emplace_back(c.x[i], *c.y[i]);
  }
  return out;
}

inline double r_squared(const std::vector<std::pair<double, double>>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) sx += x, sy += y;
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (syy == 0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

}  // namespace detail

/// Verdict of one claim against evaluated curves. Undefined points are skipped
/// and reported; fewer than three usable points make the claim inconclusive.
inline ClaimResult evaluate_claim(const Claim& claim, const std::vector<Curve>& curves) {
  ClaimResult res;
  res.claim = claim;
  std::vector<Verdict> parts;
  std::string detail;
  auto append = [&](const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  };
  if (claim.kind == ClaimKind::ordered_curves) {
    for (const auto& [lo, hi] : claim.order) {
      const Curve& a = curves.at(static_cast<std::size_t>(lo));
      const Curve& b = curves.at(static_cast<std::size_t>(hi));
      detail::SignTally t;
      for (std::size_t i = 0; i < a.x.size() && i < b.x.size(); ++i) {
        if (a.y[i] && b.y[i] && std::isfinite(*a.y[i]) && std::isfinite(*b.y[i])) {
          t.add(*b.y[i] - *a.y[i]);
        }
      }
      parts.push_back(t.total() >= 3 ? t.verdict() : Verdict::inconclusive);
      append(b.label + " above " + a.label + ": " + t.describe());
    }
  } else {
    for (int idx : claim.curves) {
      const Curve& c = curves.at(static_cast<std::size_t>(idx));
      const auto pts = detail::valid_points(c);
      const int skipped = static_cast<int>(c.x.size() - pts.size());
      if (pts.size() < 3) {
        parts.push_back(Verdict::inconclusive);
        append(c.label + ": " + std::to_string(pts.size()) + " usable points");
        continue;
      }
      if (claim.kind == ClaimKind::linear_in_x) {
        const double r2 = detail::r_squared(pts);
        parts.push_back(r2 >= linearity_r2 ? Verdict::consistent : Verdict::contradicted);
        append(c.label + ": R^2 = " + csv::num(r2));
      } else {
        detail::SignTally t;
        for (std::size_t i = 1; i < pts.size(); ++i) {
          const double d = pts[i].second - pts[i - 1].second;
          t.add(claim.kind == ClaimKind::increasing_in_x ? d : -d);
        }
        parts.push_back(t.verdict());
        append(c.label + ": " + std::to_string(t.positive) + "/" + std::to_string(t.total()) +
               " steps as claimed" + (skipped ? ", " + std::to_string(skipped) + " undefined" : ""));
      }
    }
  }
  res.verdict = detail::combine(parts);
  res.detail = detail;
  return res;
}

inline FigureResult run_figure(const FigureSpec& spec, unsigned threads = 1) {
  if (spec.points < 3) throw Error(ErrorKind::argument, "figure needs at least 3 points per curve");
  FigureResult out;
  out.spec = spec;
  for (const auto& cs : spec.curves) out.curves.push_back(evaluate_curve(spec, cs, threads));
  for (const auto& cl : spec.claims) out.verdicts.push_back(evaluate_claim(cl, out.curves));
  return out;
}

inline FigureResult run_figure(int id, unsigned threads = 1) { return run_figure(figure_spec(id), threads); }

// --- serialization ------------------------------------------------------------

inline std::string curve_file_name(int id, const Curve& c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "fig%02d_", id);
  return buf + c.label + ".csv";
}

inline std::string verdict_file_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fig%02d_verdicts.json", id);
  return buf;
}

/// x, y, then the parameters of the point.
inline std::string curve_csv(const FigureSpec& f, const Curve& c) {
  std::string out = "x," + std::string(to_string(f.y)) + ",x_name,n,m,B,Phi,a,lambda,V1,V2,V3,T,status\n";
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    const auto p = spectra::with_value(c.params, f.x, c.x[i]);
    const double T = f.x == spectra::SweepVar::T ? c.x[i] : c.T;
    out += csv::row({csv::num(c.x[i]), c.y[i] ? csv::num(*c.y[i]) : "nan", to_string(f.x),
                     csv::num(p.quantum.n), csv::num(p.quantum.m), csv::num(p.fields.B),
                     csv::num(p.fields.Phi_AB), csv::num(p.mass.a()), csv::num(p.potential.lambda),
                     csv::num(p.potential.V1), csv::num(p.potential.V2), csv::num(p.potential.V3),
                     f.y == Quantity::E ? "nan" : csv::num(T), c.status[i]});
  }
  return out;
}

inline nlohmann::ordered_json verdicts_json(const FigureResult& r) {
  nlohmann::ordered_json j;
  j["figure"] = r.spec.id;
  j["title"] = r.spec.title;
  j["x"] = std::string(to_string(r.spec.x));
  j["y"] = std::string(to_string(r.spec.y));
  j["range"] = {r.spec.lo, r.spec.hi};
  j["points"] = r.spec.points;
  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (const auto& c : r.curves) curves.push_back(curve_file_name(r.spec.id, c));
  j["curves"] = curves;
  nlohmann::ordered_json claims = nlohmann::ordered_json::array();
  for (const auto& v : r.verdicts) {
    nlohmann::ordered_json cj;
    cj["id"] = v.claim.id;
    cj["claim"] = v.claim.statement;
    cj["verdict"] = std::string(to_string(v.verdict));
    cj["detail"] = v.detail;
    claims.push_back(cj);
  }
  j["claims"] = claims;
  return j;
}

}  // namespace pdm::figures

#endif  // PDM_FIGURES_HPP
