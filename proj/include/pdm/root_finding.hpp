#ifndef PDM_ROOT_FINDING_HPP
#define PDM_ROOT_FINDING_HPP

// Grid bracketing + bisection for scalar functions that may be undefined on
// parts of the scan interval. The callable returns std::optional<double>;
// std::nullopt marks a point outside the function's domain and breaks any
// bracket across it.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace pdm::roots {

struct Bracket {
  double lo, hi;
};

struct Root {
  double x = 0;
  double residual = 0;
  Bracket bracket{0, 0};
  int iterations = 0;
};

struct BisectionTolerance {
  double x_rel = 1e-12;     // |dx| <= max(x_abs, x_rel * max(1, |x|))
  double x_abs = 0.0;
  double residual = 1e-10;  // |f(x)| <= residual
  int max_iterations = 400;
};

/// Bisects a sign change of f on [lo, hi]. Stops when both the interval and
/// the residual meet the tolerance, or when the interval cannot shrink further.
template <class F>
Root bisect(F&& f, double lo, double hi, double f_lo, const BisectionTolerance& tol) {
  Root r;
  r.bracket = {lo, hi};
  double a = lo, b = hi, fa = f_lo;
  double mid = 0.5 * (a + b);
  double fm = 0.0;
  for (int it = 0; it < tol.max_iterations; ++it) {
    mid = 0.5 * (a + b);
    const auto v = f(mid);
    fm = v ? *v : std::nan("");
    r.iterations = it + 1;
    if (fm == 0.0) break;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    const bool narrow = (b - a) <= std::max(tol.x_abs, tol.x_rel * std::max(1.0, std::fabs(mid)));
    const bool stuck = !(a < 0.5 * (a + b) && 0.5 * (a + b) < b);
    if ((narrow && std::fabs(fm) <= tol.residual) || stuck) {
      mid = 0.5 * (a + b);
      const auto vf = f(mid);
      fm = vf ? *vf : fm;
      break;
    }
  }
  r.x = mid;
  r.residual = fm;
  return r;
}

struct ScanOutcome {
  std::vector<Root> roots;
  int undefined_points = 0;
  int non_finite_points = 0;
};

/// Scans [lo, hi] on a uniform grid of n_grid intervals, bisects each sign
/// change between defined neighbours, returns roots in ascending order.
template <class F>
ScanOutcome scan_roots(F&& f, double lo, double hi, int n_grid, const BisectionTolerance& tol = {}) {
  ScanOutcome out;
  std::vector<double> xs(static_cast<std::size_t>(n_grid) + 1);
  std::vector<std::optional<double>> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (i + 1 == xs.size()) ? hi : lo + (hi - lo) * static_cast<double>(i) / n_grid;
    ys[i] = f(xs[i]);
    if (!ys[i]) {
      ++out.undefined_points;
    } else if (!std::isfinite(*ys[i])) {
      ++out.non_finite_points;
      ys[i].reset();
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] && *ys[i] == 0.0) {
      out.roots.push_back({xs[i], 0.0, {xs[i], xs[i]}, 0});
      continue;
    }
    if (i + 1 < xs.size() && ys[i] && ys[i + 1] && *ys[i + 1] != 0.0 &&
        std::signbit(*ys[i]) != std::signbit(*ys[i + 1])) {
      out.roots.push_back(bisect(f, xs[i], xs[i + 1], *ys[i], tol));
    }
  }
  return out;
}

}  // namespace pdm::roots

#endif  // PDM_ROOT_FINDING_HPP
