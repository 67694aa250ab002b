#pragma once

// Angular diffusion d alpha = sqrt(kappa) dB + ((kappa - 4) / 2) cot(alpha / 2) ds
// on (0, 2 pi), killed at the boundary, and the spectral objects tied to it.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sle {

struct AlphaPath {
  double kappa = 0.0;
  double alpha0 = 0.0;
  double ds = 0.0;
  std::vector<double> samples;       // samples[i] is alpha at time i * ds
  std::optional<double> absorbed_at;  // set when the path left the domain
};

struct AlphaOptions {
  /// Largest |drift * h| taken in one (sub)step.
  double drift_cap = 0.7853981633974483;  // pi / 4
  /// Absorption band; <= 0 selects min(1e-3, sqrt(kappa * ds)).
  double boundary_eps = 1e-8;
  /// Substeps are at most substep * d^2 / kappa long, d the distance to the
  /// nearer boundary; 0 keeps plain steps of length ds.
  double substep = 0.01;
};

/// Width of the absorbing band used for the given kappa and step.
double absorption_band(double kappa, double ds, const AlphaOptions& options = {});

/// Euler-Maruyama path up to s_max or absorption, whichever comes first.
AlphaPath simulate_alpha(double kappa, double alpha0, double s_max, double ds,
                         std::uint64_t seed, const AlphaOptions& options = {});

struct SurvivalEstimate {
  std::vector<double> s_grid;
  std::vector<double> probs;
  std::vector<double> stderrs;
  std::size_t n_paths = 0;
};

/// P(S > s) on s_grid from n_paths independent paths; path i uses the
/// stream stream_seed(seed, i).
SurvivalEstimate survival_curve(double kappa, double alpha0, std::span<const double> s_grid,
                                std::size_t n_paths, double ds, std::uint64_t seed,
                                unsigned threads = 0, const AlphaOptions& options = {});

/// Max |(kappa/2) phi'' + ((kappa-4)/2) cot(x/2) phi' + (1 - kappa/8) phi|
/// over grid points in [pi/8, 2 pi - pi/8], with phi = sin(x/2)^(8/kappa - 1)
/// and central differences on `grid_size` interior points of (0, 2 pi).
double eigenfunction_residual(double kappa, std::size_t grid_size);

struct SpectralResult {
  double lambda_hat = 0.0;
  std::size_t grid_size = 0;
  std::size_t sweeps = 0;
  std::vector<double> eigenvector;  // interior grid values, max-normalized
};

/// Smallest eigenvalue of -L with Dirichlet ends, by inverse power iteration
/// on the tridiagonal central-difference matrix.
SpectralResult leading_eigenvalue(double kappa, std::size_t grid_size);

/// sin(x/2)^(8/kappa - 1), the positive eigenfunction.
double eigenfunction(double kappa, double x) noexcept;

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Ensemble mean of X_s = sin(alpha_s/2)^(8/kappa-1) exp((1 - kappa/8) s) at
/// each time in s_values (X_s = 0 once absorbed). One ensemble serves all times.
std::vector<MeanEstimate> martingale_expectation(double kappa, double alpha0,
                                                 std::span<const double> s_values,
                                                 std::size_t n_paths, double ds,
                                                 std::uint64_t seed, unsigned threads = 0,
                                                 const AlphaOptions& options = {});

/// Single-time convenience overload.
MeanEstimate martingale_expectation(double kappa, double alpha0, double s,
                                    std::size_t n_paths, double ds, std::uint64_t seed,
                                    unsigned threads = 0);

}  // namespace sle
