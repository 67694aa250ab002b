#pragma once

// Monte-Carlo hitting estimates for SLE traces, the closed-form harmonic
// measure and one-point density, and occupation densities.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sle/fit.hpp"
#include "sle/loewner.hpp"

namespace sle {

/// Hull exponent 1 - kappa/8.
constexpr double hull_exponent(double kappa) noexcept { return 1.0 - kappa / 8.0; }
/// Boundary exponent 8/kappa - 1.
constexpr double boundary_exponent(double kappa) noexcept { return 8.0 / kappa - 1.0; }
/// Min(2, 1 + kappa/8).
constexpr double trace_dimension(double kappa) noexcept {
  return kappa >= 8.0 ? 2.0 : 1.0 + kappa / 8.0;
}

/// How each path of an ensemble is discretized and evaluated.
struct EnsembleConfig {
  double horizon = 0.0;     // capacity time T; 0 picks default_horizon
  std::size_t steps = 0;    // driving steps over [0, T]; 0 picks default_steps
  std::size_t refine = 4;   // trace samples per step
  unsigned threads = 0;     // 0: SLE_THREADS or hardware concurrency
};

/// T = 4 |z|^2, the horizon used when none is given.
double default_horizon(Complex z) noexcept;
/// 500 steps per unit capacity time, at least 1000.
std::size_t default_steps(double horizon) noexcept;

struct HittingEstimate {
  Complex z0;
  std::vector<double> eps_list;
  std::vector<double> probs;
  std::vector<double> stderrs;
  std::size_t n_paths = 0;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::size_t refine = 1;
  /// Largest trace sample gap observed near z0 over the ensemble.
  double trace_mesh = 0.0;
  std::vector<std::string> warnings;
};

/// Fraction of paths whose trace comes within eps of z0, for each eps.
/// Path i is driven by stream_seed(master_seed, i). Requires Im z0 > 0 and
/// 0 < eps < Im z0 for every eps.
HittingEstimate hitting_probability_mc(Complex z0, std::span<const double> eps_list,
                                       double kappa, std::size_t n_paths,
                                       const EnsembleConfig& config,
                                       std::uint64_t master_seed);

struct AngleProbability {
  double angle;
  double prob;
  double std_error;
};

/// Hitting probability of B(modulus e^{i angle}, eps) for each angle, all
/// angles evaluated on one shared ensemble.
std::vector<AngleProbability> angle_profile(double kappa, double modulus,
                                            std::span<const double> angles, double eps,
                                            std::size_t n_paths, const EnsembleConfig& config,
                                            std::uint64_t seed);

struct TwoPointEstimate {
  double prob = 0.0;
  double std_error = 0.0;
  double prob_z = 0.0;   // marginal at z on the same ensemble
  double prob_zp = 0.0;  // marginal at z'
};

/// P(trace hits both B(z, eps) and B(z', eps)). Requires eps < |z - z'| / 2.
TwoPointEstimate two_point_mc(Complex z, Complex zp, double eps, double kappa,
                              std::size_t n_paths, const EnsembleConfig& config,
                              std::uint64_t seed);

struct PointPair {
  Complex z;
  Complex zp;
};

/// Joint hitting probabilities of every pair at each eps, on one shared
/// ensemble. Result is indexed [pair][eps].
std::vector<std::vector<TwoPointEstimate>> two_point_table(
    std::span<const PointPair> pairs, std::span<const double> eps_list, double kappa,
    std::size_t n_paths, const EnsembleConfig& config, std::uint64_t seed);

struct TwoPointExponents {
  /// Shared slope of log P(both) against log eps across pairs.
  LinearFit eps_fit;
  /// Shared slope of log(P(both) / (P(z) P(z'))) against log |z - z'|
  /// across eps values. Dividing by the marginals cancels the boundary
  /// factors, which change with the position of each point.
  LinearFit separation_fit;
  /// Cells left out because a probability was 0 or 1.
  std::size_t dropped = 0;
};

/// Exponent fits over a two_point_table. Each cell is weighted by
/// n P / (1 - P), the inverse delta-method variance of log P(both).
TwoPointExponents two_point_exponents(std::span<const PointPair> pairs,
                                      std::span<const double> eps_list,
                                      const std::vector<std::vector<TwoPointEstimate>>& table,
                                      std::size_t n_paths);

/// Harmonic measure of the positive real axis seen from z in the upper
/// half-plane: 1/2 + arctan(Re z / Im z) / pi.
double harmonic_measure_pos_axis(Complex z);

/// min(omega_z(R+), omega_z(R-)).
double min_side_measure(Complex z);

/// Im(z)^(kappa/8 - 1) sin(arg z)^(8/kappa - 1), i.e. the one-point density
/// with its unknown kappa-dependent constant set to 1. Requires kappa in (0, 8).
double phi1(Complex z, double kappa);

struct Window {
  double x_min, x_max, y_min, y_max;
  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
};

/// Row-major cells x cells grid over a window.
struct DensityGrid {
  Window window{};
  std::size_t cells = 0;
  std::vector<double> values;  // values[row * cells + col], row 0 at y_min

  double& at(std::size_t row, std::size_t col) { return values[row * cells + col]; }
  double at(std::size_t row, std::size_t col) const { return values[row * cells + col]; }
  double cell_area() const noexcept;
  /// Sum of value * cell area.
  double total_mass() const noexcept;
};

/// Per cell: eps^{-s} times the fraction of the cell within eps of the trace
/// points, with s = 1 - kappa/8 of the trace. The fraction is estimated on
/// a subsamples x subsamples lattice of sub-cell centers.
DensityGrid occupation_density(const TracePath& trace, double eps, const Window& window,
                               std::size_t cells, std::size_t subsamples = 8);

}  // namespace sle
