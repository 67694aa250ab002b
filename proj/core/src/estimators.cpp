#include "sle/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "sle/error.hpp"
#include "sle/parallel.hpp"
#include "sle/rng.hpp"

namespace sle {

double default_horizon(Complex z) noexcept { return 4.0 * std::norm(z); }

std::size_t default_steps(double horizon) noexcept {
  return std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(500.0 * horizon)));
}

namespace {

constexpr double kMeshFactor = 5.0;

EnsembleConfig resolve(const EnsembleConfig& config, std::span<const Complex> targets) {
  EnsembleConfig c = config;
  if (c.horizon <= 0.0) {
    for (const Complex& z : targets) c.horizon = std::max(c.horizon, default_horizon(z));
  }
  if (c.steps == 0) c.steps = default_steps(c.horizon);
  require(c.refine >= 1, "refine must be >= 1");
  return c;
}

struct EnsembleDistances {
  // distances[i * targets + t]
  std::vector<double> distances;
  double mesh = 0.0;
};

// Per path, screened trace distances to every target out to `radius`.
EnsembleDistances ensemble_distances(double kappa, std::span<const Complex> targets,
                                     double radius, std::size_t n_paths,
                                     const EnsembleConfig& c, std::uint64_t seed) {
  const std::size_t m = targets.size();
  EnsembleDistances out;
  out.distances.assign(n_paths * m, 0.0);
  std::vector<double> mesh(n_paths, 0.0);
  parallel_for(n_paths, c.threads, [&](std::size_t i) {
    const DrivingPath driving = sample_driving(kappa, c.horizon, c.steps, stream_seed(seed, i));
    TraceOptions options;
    options.refine = c.refine;
    NearTraceResult r = near_trace_distances(driving, targets, radius, options);
    std::copy(r.distances.begin(), r.distances.end(), out.distances.begin() + i * m);
    mesh[i] = r.local_mesh;
  });
  for (const double v : mesh) out.mesh = std::max(out.mesh, v);
  return out;
}

double binomial_stderr(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

void check_common(double kappa, std::size_t n_paths) {
  require(kappa > 0.0, "kappa must be positive");
  require(n_paths >= 1, "n_paths must be >= 1");
}

}  // namespace

HittingEstimate hitting_probability_mc(Complex z0, std::span<const double> eps_list,
                                       double kappa, std::size_t n_paths,
                                       const EnsembleConfig& config,
                                       std::uint64_t master_seed) {
  check_common(kappa, n_paths);
  require(z0.imag() > 0.0, "z0 must lie in the open upper half-plane");
  require(!eps_list.empty(), "eps list is empty");
  for (const double e : eps_list) {
    require(e > 0.0, "eps must be positive");
    require(e < z0.imag(), "eps must be smaller than Im z0");
  }
  const EnsembleConfig c = resolve(config, std::span(&z0, 1));
  const double radius = *std::max_element(eps_list.begin(), eps_list.end());
  const EnsembleDistances d = ensemble_distances(kappa, std::span(&z0, 1), radius, n_paths, c,
                                                 master_seed);

  HittingEstimate est;
  est.z0 = z0;
  est.eps_list.assign(eps_list.begin(), eps_list.end());
  est.n_paths = n_paths;
  est.horizon = c.horizon;
  est.steps = c.steps;
  est.refine = c.refine;
  est.trace_mesh = d.mesh;
  for (const double e : eps_list) {
    std::size_t hits = 0;
    for (const double dist : d.distances) hits += dist <= e ? 1 : 0;
    const double p = static_cast<double>(hits) / static_cast<double>(n_paths);
    est.probs.push_back(p);
    est.stderrs.push_back(binomial_stderr(p, n_paths));
  }
  const double eps_min = *std::min_element(eps_list.begin(), eps_list.end());
  if (eps_min < kMeshFactor * d.mesh)
    est.warnings.push_back("smallest eps " + std::to_string(eps_min) +
                           " is below 5x the observed trace mesh " + std::to_string(d.mesh));
  return est;
}

std::vector<AngleProbability> angle_profile(double kappa, double modulus,
                                            std::span<const double> angles, double eps,
                                            std::size_t n_paths, const EnsembleConfig& config,
                                            std::uint64_t seed) {
  check_common(kappa, n_paths);
  require(modulus > 0.0, "modulus must be positive");
  require(!angles.empty(), "angle list is empty");
  require(eps > 0.0, "eps must be positive");
  std::vector<Complex> targets;
  for (const double a : angles) {
    require(a > 0.0 && a < std::numbers::pi, "angles must lie in (0, pi)");
    require(eps < modulus * std::sin(a), "eps must be smaller than Im z0 for every angle");
    targets.push_back(std::polar(modulus, a));
  }
  const EnsembleConfig c = resolve(config, targets);
  const EnsembleDistances d = ensemble_distances(kappa, targets, eps, n_paths, c, seed);
  std::vector<AngleProbability> out;
  const std::size_t m = targets.size();
  for (std::size_t t = 0; t < m; ++t) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_paths; ++i) hits += d.distances[i * m + t] <= eps ? 1 : 0;
    const double p = static_cast<double>(hits) / static_cast<double>(n_paths);
    out.push_back({angles[t], p, binomial_stderr(p, n_paths)});
  }
  return out;
}

std::vector<std::vector<TwoPointEstimate>> two_point_table(
    std::span<const PointPair> pairs, std::span<const double> eps_list, double kappa,
    std::size_t n_paths, const EnsembleConfig& config, std::uint64_t seed) {
  check_common(kappa, n_paths);
  require(!pairs.empty(), "no point pairs");
  require(!eps_list.empty(), "eps list is empty");
  std::vector<Complex> targets;
  for (const PointPair& p : pairs) {
    require(p.z.imag() > 0.0 && p.zp.imag() > 0.0,
            "points must lie in the open upper half-plane");
    targets.push_back(p.z);
    targets.push_back(p.zp);
  }
  for (const double e : eps_list) {
    require(e > 0.0, "eps must be positive");
    for (const Complex& t : targets) require(e < t.imag(), "eps must be smaller than Im z");
    for (const PointPair& p : pairs)
      require(e < std::abs(p.z - p.zp) / 2.0, "eps must be smaller than |z - z'| / 2");
  }
  const EnsembleConfig c = resolve(config, targets);
  const double radius = *std::max_element(eps_list.begin(), eps_list.end());
  const EnsembleDistances d = ensemble_distances(kappa, targets, radius, n_paths, c, seed);

  const std::size_t m = targets.size();
  const double nn = static_cast<double>(n_paths);
  std::vector<std::vector<TwoPointEstimate>> table(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    for (const double e : eps_list) {
      std::size_t both = 0, hz = 0, hzp = 0;
      for (std::size_t i = 0; i < n_paths; ++i) {
        const bool a = d.distances[i * m + 2 * j] <= e;
        const bool b = d.distances[i * m + 2 * j + 1] <= e;
        hz += a;
        hzp += b;
        both += a && b;
      }
      TwoPointEstimate t;
      t.prob = static_cast<double>(both) / nn;
      t.std_error = binomial_stderr(t.prob, n_paths);
      t.prob_z = static_cast<double>(hz) / nn;
      t.prob_zp = static_cast<double>(hzp) / nn;
      table[j].push_back(t);
    }
  }
  return table;
}

TwoPointEstimate two_point_mc(Complex z, Complex zp, double eps, double kappa,
                              std::size_t n_paths, const EnsembleConfig& config,
                              std::uint64_t seed) {
  const PointPair pair{z, zp};
  return two_point_table(std::span(&pair, 1), std::span(&eps, 1), kappa, n_paths, config,
                         seed)
      .front()
      .front();
}

TwoPointExponents two_point_exponents(std::span<const PointPair> pairs,
                                      std::span<const double> eps_list,
                                      const std::vector<std::vector<TwoPointEstimate>>& table,
                                      std::size_t n_paths) {
  require(table.size() == pairs.size(), "table must have one row per pair");
  for (const auto& row : table) require(row.size() == eps_list.size(), "table row size");
  const double nn = static_cast<double>(n_paths);
  TwoPointExponents out;
  auto usable = [&](const TwoPointEstimate& t) {
    return t.prob > 0.0 && t.prob < 1.0 && t.prob_z > 0.0 && t.prob_zp > 0.0;
  };
  std::vector<FitGroup> by_pair(pairs.size()), by_eps(eps_list.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const double log_sep = std::log(std::abs(pairs[j].z - pairs[j].zp));
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const TwoPointEstimate& t = table[j][e];
      if (!usable(t)) {
        ++out.dropped;
        continue;
      }
      const double w = nn * t.prob / (1.0 - t.prob);
      by_pair[j].xs.push_back(std::log(eps_list[e]));
      by_pair[j].ys.push_back(std::log(t.prob));
      by_pair[j].weights.push_back(w);
      by_eps[e].xs.push_back(log_sep);
      by_eps[e].ys.push_back(std::log(t.prob / (t.prob_z * t.prob_zp)));
      by_eps[e].weights.push_back(w);
    }
  }
  out.eps_fit = fit_common_slope(by_pair);
  out.separation_fit = fit_common_slope(by_eps);
  return out;
}

double harmonic_measure_pos_axis(Complex z) {
  require(z.imag() > 0.0, "harmonic measure needs Im z > 0");
  return 0.5 + std::atan(z.real() / z.imag()) / std::numbers::pi;
}

double min_side_measure(Complex z) {
  const double w = harmonic_measure_pos_axis(z);
  return std::min(w, 1.0 - w);
}

double phi1(Complex z, double kappa) {
  require(z.imag() > 0.0, "phi1 needs Im z > 0");
  require(kappa > 0.0 && kappa < 8.0, "phi1 needs kappa in (0, 8)");
  const double sin_arg = z.imag() / std::abs(z);
  return std::pow(z.imag(), kappa / 8.0 - 1.0) * std::pow(sin_arg, 8.0 / kappa - 1.0);
}

double DensityGrid::cell_area() const noexcept {
  const double n = static_cast<double>(cells);
  return window.width() / n * (window.height() / n);
}

double DensityGrid::total_mass() const noexcept {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum * cell_area();
}

DensityGrid occupation_density(const TracePath& trace, double eps, const Window& window,
                               std::size_t cells, std::size_t subsamples) {
  require(eps > 0.0, "eps must be positive");
  require(cells >= 1 && subsamples >= 1, "cells and subsamples must be >= 1");
  require(window.width() > 0.0 && window.height() > 0.0, "degenerate window");
  require(window.y_min > 0.0, "window must lie in the open upper half-plane");
  require(!trace.points.empty(), "trace is empty");

  // Bucket trace points on an eps grid; a query only inspects its 3x3 block.
  auto key = [eps](double x, double y) {
    const auto ix = static_cast<std::int64_t>(std::floor(x / eps));
    const auto iy = static_cast<std::int64_t>(std::floor(y / eps));
    return std::pair{ix, iy};
  };
  auto pack = [](std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy & 0xffffffff);
  };
  std::unordered_map<std::uint64_t, std::vector<Complex>> buckets;
  for (const Complex& p : trace.points) {
    // Points farther than eps from the window cannot matter.
    if (p.real() < window.x_min - eps || p.real() > window.x_max + eps ||
        p.imag() < window.y_min - eps || p.imag() > window.y_max + eps)
      continue;
    const auto [ix, iy] = key(p.real(), p.imag());
    buckets[pack(ix, iy)].push_back(p);
  }
  const double eps_sq = eps * eps;
  auto covered = [&](double x, double y) {
    const auto [ix, iy] = key(x, y);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find(pack(ix + dx, iy + dy));
        if (it == buckets.end()) continue;
        for (const Complex& p : it->second)
          if (std::norm(p - Complex(x, y)) <= eps_sq) return true;
      }
    return false;
  };

  DensityGrid grid;
  grid.window = window;
  grid.cells = cells;
  grid.values.assign(cells * cells, 0.0);
  const double s = hull_exponent(trace.kappa);
  const double scale = std::pow(eps, -s);
  const double cw = window.width() / static_cast<double>(cells);
  const double ch = window.height() / static_cast<double>(cells);
  const double sub = static_cast<double>(subsamples);
  for (std::size_t row = 0; row < cells; ++row) {
    for (std::size_t col = 0; col < cells; ++col) {
      std::size_t hit = 0;
      for (std::size_t a = 0; a < subsamples; ++a)
        for (std::size_t b = 0; b < subsamples; ++b) {
          const double x = window.x_min + cw * (static_cast<double>(col) + (a + 0.5) / sub);
          const double y = window.y_min + ch * (static_cast<double>(row) + (b + 0.5) / sub);
          hit += covered(x, y);
        }
      grid.at(row, col) = scale * static_cast<double>(hit) / (sub * sub);
    }
  }
  return grid;
}

}  // namespace sle
