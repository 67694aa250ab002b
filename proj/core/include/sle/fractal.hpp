#pragma once

// Box-counting dimension of traces and swallowing diagnostics.
//
// Box counting (Minkowski dimension) stands in for Hausdorff dimension:
// the latter is not computable from finitely many samples.

#include <cstdint>
#include <span>
#include <vector>

#include "sle/fit.hpp"
#include "sle/loewner.hpp"

namespace sle {

/// Number of cells of the grid eps * Z^2 (anchored at the origin, optionally
/// shifted by `offset`) containing at least one point.
std::size_t box_count(std::span<const Complex> points, double eps, Complex offset = {});

struct BoxCountTable {
  std::vector<double> eps_list;
  std::vector<std::size_t> counts;
};

BoxCountTable box_count_table(std::span<const Complex> points, std::span<const double> eps_list);

struct DimensionReport {
  PowerLawFit fit;        // slope of log N(eps) against log(1/eps)
  BoxCountTable table;
  double fine_slope = 0;    // fit on the smaller half of the scales
  double coarse_slope = 0;  // fit on the larger half
  double trace_mesh = 0;

  double d_hat() const noexcept { return fit.slope; }
  double spread() const noexcept { return fine_slope - coarse_slope; }
};

/// Box dimension estimate of a trace over the given scales.
///
/// Requires at least 3 scales spanning a factor >= 10 (ParameterError) and
/// trace.mesh() <= min(eps) / 5 (ResolutionError), so that under-resolved
/// curves cannot masquerade as one-dimensional.
DimensionReport dimension_fit(const TracePath& trace, std::span<const double> eps_list);

/// `count` log-spaced scales from 5x the trace mesh up to diameter / 4.
/// Throws ResolutionError if that range is narrower than a factor 10.
std::vector<double> auto_eps_range(const TracePath& trace, std::size_t count = 8);

/// Points (j/10, 1/2 + k/10) for j = -10..10, k = 0..10.
std::vector<Complex> standard_swallow_grid();

/// Fraction of grid points swallowed by the hull at or before `horizon`, for
/// one driving path from `seed`. Zero for horizon 0.
double swallow_fraction(double kappa, std::span<const Complex> grid, double horizon,
                        std::size_t steps, std::uint64_t seed);

}  // namespace sle
