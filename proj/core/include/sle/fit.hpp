#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sle {

/// Least-squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Log-log regression: log y = intercept + slope * log x.
struct PowerLawFit : LinearFit {
  /// Pairs dropped because x or y was not positive.
  std::size_t dropped = 0;
};

/// Ordinary least squares; needs >= 3 points with distinct x (DataError otherwise).
LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

/// OLS on (log x, log y). Non-positive pairs are dropped and counted.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// Fits p(s) ~ C exp(-rate s) by OLS of log p against s; returns the line in
/// (s, log p), so the decay rate is -slope. Zero probabilities are dropped.
PowerLawFit fit_exponential_decay(std::span<const double> s, std::span<const double> p);

/// One series of a shared-slope fit: points (x, y) with weights w.
struct FitGroup {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> weights;
};

/// Weighted least squares of y = a_g + slope * x, one intercept per group and
/// one slope for all. Weights are inverse variances, so slope_stderr comes
/// from the inverse normal matrix rather than the residuals. Needs >= 3
/// points in total, positive weights and some spread of x within a group.
/// The returned intercept is left at 0.
LinearFit fit_common_slope(std::span<const FitGroup> groups);

}  // namespace sle
