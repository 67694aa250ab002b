#include "sle/diffusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sle/error.hpp"
#include "sle/parallel.hpp"
#include "sle/rng.hpp"

namespace sle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_alpha_params(double kappa, double alpha0, double ds) {
  require(kappa > 0.0, "kappa must be positive");
  require(alpha0 > 0.0 && alpha0 < kTwoPi, "alpha0 must lie in (0, 2 pi)");
  require(ds > 0.0, "ds must be positive");
}

// Euler-Maruyama stepper shared by single paths and ensembles. Each step of
// length ds is split into substeps of length substep * d^2 / kappa while the
// distance d to the nearer boundary is small, so the drift singularity is
// resolved down to the absorbing band.
class AlphaStepper {
 public:
  AlphaStepper(double kappa, double ds, std::uint64_t seed, const AlphaOptions& options)
      : kappa_(kappa),
        ds_(ds),
        cap_(options.drift_cap),
        substep_(options.substep / kappa),
        lo_(absorption_band(kappa, ds, options)),
        hi_(kTwoPi - lo_),
        rng_(seed) {}

  // Advances alpha by one step of length ds; returns false once absorbed
  // (alpha is then clamped to the nearest end of [0, 2 pi] and lived() is the
  // time spent alive within the step).
  bool step(double& alpha) {
    double remaining = ds_;
    while (remaining > 0.0) {
      double h = remaining;
      if (substep_ > 0.0) {
        const double d = std::min(alpha, kTwoPi - alpha);
        h = std::min(h, substep_ * d * d);
      }
      double drift = 0.5 * (kappa_ - 4.0) * h / std::tan(0.5 * alpha);
      drift = std::clamp(drift, -cap_, cap_);
      alpha += std::sqrt(kappa_ * h) * normal_(rng_) + drift;
      remaining -= h;
      if (!(alpha > lo_ && alpha < hi_)) {
        alpha = alpha <= lo_ ? 0.0 : kTwoPi;
        lived_ = ds_ - remaining;
        return false;
      }
    }
    return true;
  }

  double lived() const noexcept { return lived_; }

 private:
  double kappa_;
  double ds_;
  double cap_;
  double substep_;
  double lo_;
  double hi_;
  double lived_ = 0.0;
  CounterRng rng_;
  std::normal_distribution<double> normal_;
};

std::size_t steps_for(double s, double ds) {
  return static_cast<std::size_t>(std::llround(s / ds));
}

}  // namespace

double absorption_band(double kappa, double ds, const AlphaOptions& options) {
  if (options.boundary_eps > 0.0) return options.boundary_eps;
  return std::min(1e-3, std::sqrt(kappa * ds));
}

AlphaPath simulate_alpha(double kappa, double alpha0, double s_max, double ds,
                         std::uint64_t seed, const AlphaOptions& options) {
  check_alpha_params(kappa, alpha0, ds);
  require(s_max >= 0.0, "s_max must be nonnegative");
  AlphaPath path{kappa, alpha0, ds, {}, std::nullopt};
  const std::size_t n = steps_for(s_max, ds);
  path.samples.reserve(n + 1);
  path.samples.push_back(alpha0);
  AlphaStepper stepper(kappa, ds, seed, options);
  double alpha = alpha0;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool alive = stepper.step(alpha);
    path.samples.push_back(alpha);
    if (!alive) {
      path.absorbed_at = static_cast<double>(i - 1) * ds + stepper.lived();
      break;
    }
  }
  return path;
}

SurvivalEstimate survival_curve(double kappa, double alpha0, std::span<const double> s_grid,
                                std::size_t n_paths, double ds, std::uint64_t seed,
                                unsigned threads, const AlphaOptions& options) {
  check_alpha_params(kappa, alpha0, ds);
  require(!s_grid.empty(), "survival grid is empty");
  require(n_paths >= 1, "n_paths must be >= 1");
  require(s_grid.front() >= 0.0, "survival grid must be nonnegative");
  for (std::size_t j = 1; j < s_grid.size(); ++j)
    require(s_grid[j] > s_grid[j - 1], "survival grid must be strictly increasing");

  const std::size_t horizon_steps = steps_for(s_grid.back(), ds);
  // Per path: absorption time, or infinity when it outlived the horizon.
  std::vector<double> lifetime(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    AlphaStepper stepper(kappa, ds, stream_seed(seed, i), options);
    double alpha = alpha0;
    for (std::size_t k = 0; k < horizon_steps; ++k) {
      if (!stepper.step(alpha)) {
        lifetime[i] = static_cast<double>(k) * ds + stepper.lived();
        return;
      }
    }
    lifetime[i] = std::numeric_limits<double>::infinity();
  });

  SurvivalEstimate est;
  est.s_grid.assign(s_grid.begin(), s_grid.end());
  est.n_paths = n_paths;
  for (const double s : s_grid) {
    std::size_t alive = 0;
    for (const double life : lifetime) alive += life > s ? 1 : 0;
    const double p = static_cast<double>(alive) / static_cast<double>(n_paths);
    est.probs.push_back(p);
    est.stderrs.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(n_paths)));
  }
  return est;
}

double eigenfunction(double kappa, double x) noexcept {
  return std::pow(std::sin(0.5 * x), 8.0 / kappa - 1.0);
}

double eigenfunction_residual(double kappa, std::size_t grid_size) {
  require(kappa > 0.0, "kappa must be positive");
  require(grid_size >= 16, "grid_size must be >= 16");
  const double h = kTwoPi / static_cast<double>(grid_size + 1);
  const double lambda = 1.0 - kappa / 8.0;
  const double lo = std::numbers::pi / 8.0;
  const double hi = kTwoPi - lo;
  double worst = 0.0;
  for (std::size_t i = 1; i <= grid_size; ++i) {
    const double x = static_cast<double>(i) * h;
    if (x < lo || x > hi) continue;
    const double fm = eigenfunction(kappa, x - h);
    const double f0 = eigenfunction(kappa, x);
    const double fp = eigenfunction(kappa, x + h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double r = 0.5 * kappa * d2 + 0.5 * (kappa - 4.0) / std::tan(0.5 * x) * d1 +
                     lambda * f0;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace {

// 16-point Gauss-Legendre rule on [0, 1].
struct GaussRule {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};

  GaussRule() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = 0.5 * (1.0 - x);
      weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

// Integral of sin(x/2)^mu over [lo, hi] within [0, 2 pi]. An end at 0 or
// 2 pi is handled with the substitution x = h t^(1 / (mu + 1)), which turns
// the x^mu endpoint behaviour into a smooth integrand.
double sine_power_integral(double mu, double lo, double hi, bool singular_lo,
                           bool singular_hi) {
  static const GaussRule rule;
  const auto f = [mu](double x) { return std::pow(std::sin(0.5 * x), mu); };
  const double width = hi - lo;
  double sum = 0.0;
  if (singular_lo || singular_hi) {
    const double q = 1.0 / (mu + 1.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const double d = width * std::pow(t, q);
      const double jac = width * q * std::pow(t, q - 1.0);
      sum += rule.weights[i] * f(singular_lo ? lo + d : hi - d) * jac;
    }
  } else {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * f(lo + width * rule.nodes[i]);
    sum *= width;
  }
  return sum;
}

}  // namespace

SpectralResult leading_eigenvalue(double kappa, std::size_t grid_size) {
  require(kappa > 0.0 && kappa < 8.0, "leading_eigenvalue needs kappa in (0, 8)");
  require(grid_size >= 64, "grid_size must be >= 64");
  const std::size_t n = grid_size;
  const double h = kTwoPi / static_cast<double>(n + 1);

  // L u = (kappa / (2 w)) (w u')' with scale density w = sin(x/2)^(2(kappa-4)/kappa).
  // Finite volumes around x_i = i h: fluxes use the harmonic mean of w over
  // each link, masses integrate w over each cell. This yields the symmetric
  // pencil A u = lambda M u with A tridiagonal and M diagonal.
  const double mu = 2.0 * (kappa - 4.0) / kappa;
  std::vector<double> link(n + 1);  // conductance of [x_i, x_{i+1}], i = 0..n
  for (std::size_t i = 0; i <= n; ++i) {
    const double lo = static_cast<double>(i) * h;
    link[i] = 0.5 * kappa / sine_power_integral(-mu, lo, lo + h, i == 0, i == n);
  }
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1) * h;
    mass[i] = sine_power_integral(mu, x - 0.5 * h, x + 0.5 * h, false, false);
  }
  std::vector<double> diag(n), off(n);  // off[i] couples i and i + 1
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = link[i] + link[i + 1];
    off[i] = -link[i + 1];
  }

  // Cholesky-free LDL^T of the tridiagonal A.
  std::vector<double> d(n), l(n);
  d[0] = diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (!(d[i - 1] > 0.0)) throw NumericalError("spectral matrix is not positive definite");
    l[i] = off[i - 1] / d[i - 1];
    d[i] = diag[i] - l[i] * off[i - 1];
  }
  if (!(d[n - 1] > 0.0)) throw NumericalError("spectral matrix is not positive definite");
  auto solve = [&](std::vector<double>& v) {
    for (std::size_t i = 1; i < n; ++i) v[i] -= l[i] * v[i - 1];
    for (std::size_t i = 0; i < n; ++i) v[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) v[i] -= l[i + 1] * v[i + 1];
  };
  auto rayleigh = [&](const std::vector<double>& v) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += diag[i] * v[i] * v[i];
      if (i + 1 < n) num += 2.0 * off[i] * v[i] * v[i + 1];
      den += mass[i] * v[i] * v[i];
    }
    return num / den;
  };

  std::vector<double> v(n, 1.0);
  double lambda = rayleigh(v);
  constexpr std::size_t kMaxSweeps = 10000;
  for (std::size_t sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= mass[i];
    solve(v);
    const double peak = *std::max_element(v.begin(), v.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    if (peak == 0.0 || !std::isfinite(peak))
      throw NumericalError("inverse iteration broke down");
    for (double& x : v) x /= peak;
    const double next = rayleigh(v);
    if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      SpectralResult res;
      res.lambda_hat = next;
      res.grid_size = n;
      res.sweeps = sweep;
      res.eigenvector = std::move(v);
      return res;
    }
    lambda = next;
  }
  throw NumericalError("inverse power iteration did not converge in 10^4 sweeps");
}

std::vector<MeanEstimate> martingale_expectation(double kappa, double alpha0,
                                                 std::span<const double> s_values,
                                                 std::size_t n_paths, double ds,
                                                 std::uint64_t seed, unsigned threads,
                                                 const AlphaOptions& options) {
  check_alpha_params(kappa, alpha0, ds);
  require(n_paths >= 1, "n_paths must be >= 1");
  require(!s_values.empty(), "no evaluation times");
  for (std::size_t j = 0; j < s_values.size(); ++j) {
    require(s_values[j] >= 0.0, "evaluation times must be nonnegative");
    if (j > 0) require(s_values[j] > s_values[j - 1], "evaluation times must increase");
  }
  const double p = 8.0 / kappa - 1.0;
  const double lambda = 1.0 - kappa / 8.0;
  const std::size_t m = s_values.size();

  // values[i * m + j] = X_{s_j} on path i.
  std::vector<double> values(n_paths * m, 0.0);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    AlphaStepper stepper(kappa, ds, stream_seed(seed, i), options);
    double alpha = alpha0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t target = steps_for(s_values[j], ds);
      while (k < target) {
        ++k;
        if (!stepper.step(alpha)) return;
      }
      values[i * m + j] = std::pow(std::sin(0.5 * alpha), p) *
                          std::exp(lambda * static_cast<double>(k) * ds);
    }
  });

  std::vector<MeanEstimate> out(m);
  const double nn = static_cast<double>(n_paths);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) sum += values[i * m + j];
    const double mean = sum / nn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
      const double d = values[i * m + j] - mean;
      ss += d * d;
    }
    const double var = n_paths > 1 ? ss / (nn - 1.0) : 0.0;
    out[j] = {mean, std::sqrt(var / nn)};
  }
  return out;
}

MeanEstimate martingale_expectation(double kappa, double alpha0, double s,
                                    std::size_t n_paths, double ds, std::uint64_t seed,
                                    unsigned threads) {
  const double times[] = {s};
  return martingale_expectation(kappa, alpha0, times, n_paths, ds, seed, threads).front();
}

}  // namespace sle
