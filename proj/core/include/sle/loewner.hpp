#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sle {

using Complex = std::complex<double>;

/// Square root with nonnegative imaginary part.
///
/// The branch cut is the positive real axis. Arguments on the cut map to the
/// nonnegative real root, so the result always lies in the closed upper
/// half-plane. Exactly odd under reflection: upper_sqrt(conj(a)) ==
/// -conj(upper_sqrt(a)) bit for bit.
Complex upper_sqrt(Complex a) noexcept;

/// Driving function sampled on a uniform capacity-time grid, W_0 = 0.
///
/// Immutable after construction; safe to share across threads.
class DrivingPath {
 public:
  /// Wraps given driving values. Requires kappa > 0, dt > 0, values
  /// non-empty with values[0] == 0.
  DrivingPath(double kappa, double dt, std::vector<double> values);

  /// Constant zero driving over `steps` steps of the given horizon.
  static DrivingPath zero(double kappa, double horizon, std::size_t steps);

  double kappa() const noexcept { return kappa_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps() const noexcept { return values_.size() - 1; }
  double horizon() const noexcept { return dt_ * static_cast<double>(steps()); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  /// Path with every driving value negated.
  DrivingPath reflected() const;
  /// Path for the rescaled chain (dt, W) -> (lambda^2 dt, lambda W).
  DrivingPath scaled(double lambda) const;

 private:
  double kappa_;
  double dt_;
  std::vector<double> values_;
};

/// sqrt(kappa) times a Brownian motion on `steps` uniform steps of [0, horizon].
/// The increments come from CounterRng(seed); same arguments, same path.
DrivingPath sample_driving(double kappa, double horizon, std::size_t steps,
                           std::uint64_t seed);

/// Approximate trace gamma(t_k) of the discretized chain.
struct TracePath {
  double kappa = 0.0;
  std::vector<double> times;
  std::vector<Complex> points;

  std::size_t size() const noexcept { return points.size(); }
  /// Largest distance between consecutive points.
  double mesh() const noexcept;
  /// Largest distance between any two points (bounding-box diagonal bound).
  double diameter() const noexcept;
};

/// The composed chain. With `subdivide`, a driving step whose jump exceeds
/// 0.9 * 2 sqrt(dt') (dt' the increment of the previous slit) is split into
/// equal substeps with linearly interpolated driving, as few as make every
/// substep jump stay below that bound. Each new slit then starts on the
/// previous one and consecutive samples stay close. Without it every step is
/// a single slit.
struct TraceOptions {
  /// Trace samples per slit. Values > 1 add points along the image of each
  /// slit, at fractional times j / refine of its capacity increment.
  std::size_t refine = 1;
  bool subdivide = true;
  /// When > 0, extra samples are bisected in wherever consecutive points are
  /// farther apart than this. Between steps they follow the stretch of hull
  /// boundary joining the previous tip to the base of the next slit. Gives
  /// up after 40 bisection rounds, so mesh() may still exceed it.
  double max_gap = 0.0;
};

/// One step of the chordal Loewner flow with driving frozen at `dw`:
/// z -> dw + sqrt((z - dw)^2 + 4 dt), root in the upper half-plane.
Complex slit_map_forward(Complex z, double dt, double dw) noexcept;

/// Inverse of slit_map_forward on the closed upper half-plane.
Complex slit_map_inverse(Complex w, double dt, double dw) noexcept;

/// Zipper composition: gamma_j = G_1^{-1} o ... o G_j^{-1}(W_j + 2i sqrt(dt_j)),
/// where G_j is the slit map of level j. O(n^2) in the number of slits.
TracePath compute_trace(const DrivingPath& driving, const TraceOptions& options = {});

/// Trace point at capacity time t_{k-1} + theta dt for 1 <= k <= steps and
/// theta in (0, 1]; k = 0 gives the origin. Only `subdivide` is used.
Complex trace_point(const DrivingPath& driving, std::size_t k, double theta = 1.0,
                    const TraceOptions& options = {});

struct TrackedPoint {
  Complex origin;
  Complex image;          // g_t(origin) at the last tracked time
  double log_deriv = 0;   // log |g_t'(origin)|
  std::optional<double> swallowed_at;

  bool swallowed() const noexcept { return swallowed_at.has_value(); }
  /// Im g_t(z) / |g_t'(z)|, the conformal estimate of the distance to the hull.
  double conformal_radius() const noexcept;
};

struct TrackOptions {
  /// A point is swallowed once |g_t(z) - W_t| < swallow_tol * sqrt(dt).
  double swallow_tol = 1e-6;
  /// Relative width of the branch cut band of the square-root argument.
  /// Unswallowed points in deep fjords of a simple curve can reach 1e-20.
  double cut_tol = 1e-24;
  /// Same chain as TraceOptions::subdivide.
  bool subdivide = true;
};

/// Pushes z through every slit of the forward flow, accumulating log|g'|
/// and detecting swallowing. Requires Im z > 0.
TrackedPoint track_point(const DrivingPath& driving, Complex z,
                         const TrackOptions& options = {});

/// track_point for several points sharing one driving path.
std::vector<TrackedPoint> track_points(const DrivingPath& driving,
                                       std::span<const Complex> zs,
                                       const TrackOptions& options = {});

struct DistanceBounds {
  double lower;
  double upper;
};

/// Koebe bounds (q/4, 4q) on the distance from the origin point to the hull
/// and the real line, q = Im g_t(z) / |g_t'(z)|. Throws StateError for a
/// swallowed point.
DistanceBounds conformal_distance_bounds(const TrackedPoint& p);

/// min_k |gamma_k - z|. Requires a non-empty trace.
double trace_distance(const TracePath& trace, Complex z);

struct NearTraceResult {
  /// Per target: minimum distance to the evaluated trace points.
  std::vector<double> distances;
  /// Largest gap between consecutive samples of one slit, from its base on
  /// the earlier curve to its tip, near some target (within twice the
  /// radius); 0 when there are none.
  double local_mesh = 0.0;
  /// Number of trace points evaluated.
  std::size_t evaluated = 0;
};

/// For each target, the minimum distance to the trace points of the chain,
/// evaluated without building the full trace.
///
/// Steps whose conformal data already proves that none of their trace points
/// is within `radius` of a target are skipped, as are all steps after a
/// target has been swallowed. The samples are those of compute_trace plus
/// the base of every slit, which lies on the earlier curve. So for every
/// target the distance is the minimum over these samples, up to its
/// swallowing, whenever that minimum is <= radius, and exceeds radius
/// otherwise (infinity if no step had to be evaluated).
/// Uses `refine` and `subdivide` of the options; max_gap is ignored.
NearTraceResult near_trace_distances(const DrivingPath& driving,
                                     std::span<const Complex> targets, double radius,
                                     const TraceOptions& options = {});

}  // namespace sle
