#include "sle/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sle/error.hpp"

namespace sle {

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), "fit: x and y sizes differ");
  const std::size_t n = xs.size();
  if (n < 3) throw DataError("fit needs at least 3 usable points");
  const double nn = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nn;
  my /= nn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw DataError("fit needs at least two distinct x values");
  LinearFit f;
  f.n_points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    sse += e * e;
  }
  f.slope_stderr = std::sqrt(sse / (nn - 2.0) / sxx);
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return f;
}

namespace {

PowerLawFit fit_logged(std::span<const double> xs, std::span<const double> ys, bool log_x) {
  require(xs.size() == ys.size(), "fit: x and y sizes differ");
  std::vector<double> lx, ly;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0.0 && (!log_x || xs[i] > 0.0)) {
      lx.push_back(log_x ? std::log(xs[i]) : xs[i]);
      ly.push_back(std::log(ys[i]));
    } else {
      ++dropped;
    }
  }
  PowerLawFit f;
  static_cast<LinearFit&>(f) = fit_linear(lx, ly);
  f.dropped = dropped;
  return f;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  return fit_logged(xs, ys, true);
}

PowerLawFit fit_exponential_decay(std::span<const double> s, std::span<const double> p) {
  return fit_logged(s, p, false);
}

LinearFit fit_common_slope(std::span<const FitGroup> groups) {
  // Eliminating each intercept leaves the slope normal equation in
  // within-group weighted deviations.
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t n = 0;
  for (const FitGroup& g : groups) {
    require(g.xs.size() == g.ys.size() && g.xs.size() == g.weights.size(),
            "fit: group sizes differ");
    double sw = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
      require(g.weights[i] > 0.0, "fit: weights must be positive");
      sw += g.weights[i];
      mx += g.weights[i] * g.xs[i];
      my += g.weights[i] * g.ys[i];
    }
    if (sw == 0.0) continue;
    mx /= sw;
    my /= sw;
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
      const double dx = g.xs[i] - mx, dy = g.ys[i] - my;
      sxx += g.weights[i] * dx * dx;
      sxy += g.weights[i] * dx * dy;
      syy += g.weights[i] * dy * dy;
    }
    n += g.xs.size();
  }
  if (n < 3) throw DataError("fit needs at least 3 usable points");
  if (sxx <= 0.0) throw DataError("fit needs spread in x within some group");
  LinearFit f;
  f.n_points = n;
  f.slope = sxy / sxx;
  f.slope_stderr = std::sqrt(1.0 / sxx);
  const double sse = syy - f.slope * sxy;
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return f;
}

}  // namespace sle
