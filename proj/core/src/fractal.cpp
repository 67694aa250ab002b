#include "sle/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "sle/error.hpp"

namespace sle {

std::size_t box_count(std::span<const Complex> points, double eps, Complex offset) {
  require(eps > 0.0, "box size must be positive");
  if (points.empty()) return 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  cells.reserve(points.size());
  for (const Complex& p : points) {
    const Complex q = p - offset;
    cells.emplace_back(static_cast<std::int64_t>(std::floor(q.real() / eps)),
                       static_cast<std::int64_t>(std::floor(q.imag() / eps)));
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

BoxCountTable box_count_table(std::span<const Complex> points, std::span<const double> eps_list) {
  BoxCountTable t;
  t.eps_list.assign(eps_list.begin(), eps_list.end());
  std::sort(t.eps_list.begin(), t.eps_list.end(), std::greater<>());
  for (const double e : t.eps_list) t.counts.push_back(box_count(points, e));
  return t;
}

namespace {

PowerLawFit fit_table(const BoxCountTable& t, std::size_t first, std::size_t last) {
  std::vector<double> inv, n;
  for (std::size_t i = first; i < last; ++i) {
    inv.push_back(1.0 / t.eps_list[i]);
    n.push_back(static_cast<double>(t.counts[i]));
  }
  return fit_power_law(inv, n);
}

}  // namespace

DimensionReport dimension_fit(const TracePath& trace, std::span<const double> eps_list) {
  require(!trace.points.empty(), "trace is empty");
  require(eps_list.size() >= 3, "need at least 3 scales");
  for (const double e : eps_list) require(e > 0.0, "scales must be positive");
  const auto [lo, hi] = std::minmax_element(eps_list.begin(), eps_list.end());
  require(*hi >= 10.0 * *lo, "scales must span at least one decade");
  const double mesh = trace.mesh();
  if (mesh > *lo / 5.0)
    throw ResolutionError("trace mesh " + std::to_string(mesh) +
                          " exceeds 1/5 of the smallest scale " + std::to_string(*lo));

  DimensionReport r;
  r.trace_mesh = mesh;
  r.table = box_count_table(trace.points, eps_list);
  const std::size_t n = r.table.eps_list.size();
  r.fit = fit_table(r.table, 0, n);
  // Halves overlap in the middle scale when n is odd; each needs 3 points.
  const std::size_t half = std::max<std::size_t>(3, (n + 1) / 2);
  if (n >= 4) {
    r.coarse_slope = fit_table(r.table, 0, half).slope;
    r.fine_slope = fit_table(r.table, n - half, n).slope;
  } else {
    r.coarse_slope = r.fine_slope = r.fit.slope;
  }
  return r;
}

std::vector<double> auto_eps_range(const TracePath& trace, std::size_t count) {
  require(count >= 3, "need at least 3 scales");
  const double lo = 5.0 * trace.mesh();
  const double hi = trace.diameter() / 4.0;
  if (!(hi >= 10.0 * lo))
    throw ResolutionError("trace too coarse: usable scale range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] is narrower than one decade");
  std::vector<double> eps(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    eps[i] = hi * std::exp(-ratio * static_cast<double>(i));
  eps.back() = lo;
  return eps;
}

std::vector<Complex> standard_swallow_grid() {
  std::vector<Complex> grid;
  for (int j = -10; j <= 10; ++j)
    for (int k = 0; k <= 10; ++k) grid.emplace_back(j / 10.0, 0.5 + k / 10.0);
  return grid;
}

double swallow_fraction(double kappa, std::span<const Complex> grid, double horizon,
                        std::size_t steps, std::uint64_t seed) {
  require(kappa > 0.0, "kappa must be positive");
  require(horizon >= 0.0, "horizon must be nonnegative");
  require(!grid.empty(), "grid is empty");
  for (const Complex& z : grid) require(z.imag() > 0.0, "grid points must be interior");
  if (horizon == 0.0) return 0.0;
  const DrivingPath driving = sample_driving(kappa, horizon, steps, seed);
  const std::vector<TrackedPoint> tracked = track_points(driving, grid);
  std::size_t swallowed = 0;
  for (const TrackedPoint& p : tracked)
    swallowed += p.swallowed() && *p.swallowed_at <= horizon ? 1 : 0;
  return static_cast<double>(swallowed) / static_cast<double>(grid.size());
}

}  // namespace sle
