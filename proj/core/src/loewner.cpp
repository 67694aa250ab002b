#include "sle/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sle/error.hpp"
#include "sle/rng.hpp"

namespace sle {

Complex upper_sqrt(Complex a) noexcept {
  const double x = a.real();
  const double y = a.imag();
  const double r = std::sqrt(x * x + y * y);
  const double u = std::sqrt(0.5 * (r + std::abs(x)));
  if (u == 0.0) return {0.0, 0.0};
  const double v = y / (2.0 * u);
  if (x >= 0.0) return {std::copysign(u, y), std::abs(v)};
  return {v, u};
}

// ---------------------------------------------------------------------------
// DrivingPath

DrivingPath::DrivingPath(double kappa, double dt, std::vector<double> values)
    : kappa_(kappa), dt_(dt), values_(std::move(values)) {
  require(kappa_ > 0.0, "kappa must be positive");
  require(dt_ > 0.0, "dt must be positive");
  require(!values_.empty(), "driving path needs at least one value");
  require(values_.front() == 0.0, "driving path must start at W_0 = 0");
}

DrivingPath DrivingPath::zero(double kappa, double horizon, std::size_t steps) {
  require(horizon > 0.0, "horizon must be positive");
  require(steps >= 1, "steps must be >= 1");
  return DrivingPath(kappa, horizon / static_cast<double>(steps),
                     std::vector<double>(steps + 1, 0.0));
}

DrivingPath DrivingPath::reflected() const {
  std::vector<double> w(values_.size());
  std::transform(values_.begin(), values_.end(), w.begin(),
                 [](double v) { return -v; });
  w.front() = 0.0;
  return DrivingPath(kappa_, dt_, std::move(w));
}

DrivingPath DrivingPath::scaled(double lambda) const {
  require(lambda > 0.0, "scale factor must be positive");
  std::vector<double> w(values_.size());
  std::transform(values_.begin(), values_.end(), w.begin(),
                 [lambda](double v) { return lambda * v; });
  return DrivingPath(kappa_, lambda * lambda * dt_, std::move(w));
}

DrivingPath sample_driving(double kappa, double horizon, std::size_t steps,
                           std::uint64_t seed) {
  require(kappa > 0.0, "kappa must be positive");
  require(horizon > 0.0, "horizon must be positive");
  require(steps >= 1, "steps must be >= 1");
  const double dt = horizon / static_cast<double>(steps);
  const double sigma = std::sqrt(kappa * dt);
  CounterRng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> w(steps + 1);
  w[0] = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) w[k] = w[k - 1] + sigma * normal(rng);
  return DrivingPath(kappa, dt, std::move(w));
}

// ---------------------------------------------------------------------------
// Trace

double TracePath::mesh() const noexcept {
  double m = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k)
    m = std::max(m, std::abs(points[k] - points[k - 1]));
  return m;
}

double TracePath::diameter() const noexcept {
  if (points.empty()) return 0.0;
  double x0 = points[0].real(), x1 = x0, y0 = points[0].imag(), y1 = y0;
  for (const Complex& p : points) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  return std::hypot(x1 - x0, y1 - y0);
}

Complex slit_map_forward(Complex z, double dt, double dw) noexcept {
  const Complex u = z - dw;
  return dw + upper_sqrt(u * u + 4.0 * dt);
}

Complex slit_map_inverse(Complex w, double dt, double dw) noexcept {
  const Complex u = w - dw;
  return dw + upper_sqrt(u * u - 4.0 * dt);
}

namespace {

// The chain actually composed: every driving step, split into equal substeps
// with linearly interpolated driving wherever the jump from the previous
// level is too large for the new slit to start on the previous one.
struct Chain {
  std::vector<double> w{0.0};    // w[j]: driving value of level j; w[0] = 0
  std::vector<double> dt{0.0};   // dt[j]: capacity increment of level j
  std::vector<double> t{0.0};    // t[j]: capacity time at the end of level j
  std::vector<std::size_t> end;  // end[k]: last level of driving step k

  std::size_t levels() const noexcept { return w.size() - 1; }
};

// New slits start on the previous slit when |W_j - W_{j-1}| < 2 sqrt(dt_{j-1});
// the margin keeps them off its base.
constexpr double kJumpRatio = 0.9;

Chain build_chain(const DrivingPath& driving, bool subdivide) {
  const auto w = driving.values();
  const double dt = driving.dt();
  const std::size_t n = driving.steps();
  Chain c;
  c.end.assign(n + 1, 0);
  c.w.reserve(n + 1);
  c.dt.reserve(n + 1);
  c.t.reserve(n + 1);
  double prev_dt = dt;
  for (std::size_t k = 1; k <= n; ++k) {
    const double jump = std::abs(w[k] - w[k - 1]);
    std::size_t m = 1;
    if (subdivide && jump > 0.0) {
      const double limit = 2.0 * kJumpRatio;
      // |jump| / m <= limit sqrt(dt / m) and the first substep against prev_dt.
      const double by_own = jump * jump / (limit * limit * dt);
      const double by_prev = jump / (limit * std::sqrt(prev_dt));
      m = static_cast<std::size_t>(std::ceil(std::max({1.0, by_own, by_prev})));
    }
    const double sub_dt = dt / static_cast<double>(m);
    for (std::size_t i = 1; i <= m; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(m);
      c.w.push_back(i == m ? w[k] : w[k - 1] + f * (w[k] - w[k - 1]));
      c.dt.push_back(sub_dt);
      c.t.push_back(i == m ? static_cast<double>(k) * dt
                           : (static_cast<double>(k - 1) + f) * dt);
    }
    c.end[k] = c.levels();
    prev_dt = sub_dt;
  }
  return c;
}

// One inverse slit step u -> dw + sqrt((u - dw)^2 - 4 dt), upper root.
// Branch-free so that batched loops vectorize; upper_sqrt() computes the
// same values.
inline void inverse_step(double dw, double four_dt, double& x, double& y) noexcept {
  const double ux = x - dw;
  const double ax = ux * ux - y * y - four_dt;
  const double ay = 2.0 * ux * y;
  const double r = std::sqrt(ax * ax + ay * ay);
  const double s = std::sqrt(0.5 * (r + std::abs(ax)));
  const double v = s > 0.0 ? ay / (2.0 * s) : 0.0;
  const bool right = ax >= 0.0;
  x = dw + (right ? std::copysign(s, ay) : v);
  y = right ? std::abs(v) : s;
}

constexpr std::size_t kBatch = 8;

// Pulls back up to kBatch points through G_1^{-1} o ... o G_{levels[b]}^{-1}.
// levels must be ascending. The shared tail j <= levels[0] runs all chains
// in lockstep, which is where nearly all of the time goes.
void pull_back_batch(const Chain& c, std::span<const std::size_t> levels, double* x,
                     double* y) noexcept {
  const std::size_t count = levels.size();
  const std::size_t low = levels.front();
  for (std::size_t j = levels.back(); j > low; --j) {
    const double dw = c.w[j];
    const double four_dt = 4.0 * c.dt[j];
    for (std::size_t b = 0; b < count; ++b)
      if (j <= levels[b]) inverse_step(dw, four_dt, x[b], y[b]);
  }
  if (count == kBatch) {
    for (std::size_t j = low; j >= 1; --j) {
      const double dw = c.w[j];
      const double four_dt = 4.0 * c.dt[j];
      for (std::size_t b = 0; b < kBatch; ++b) inverse_step(dw, four_dt, x[b], y[b]);
    }
  } else {
    for (std::size_t j = low; j >= 1; --j) {
      const double dw = c.w[j];
      const double four_dt = 4.0 * c.dt[j];
      for (std::size_t b = 0; b < count; ++b) inverse_step(dw, four_dt, x[b], y[b]);
    }
  }
}

// Pulls back points[i] (given in the coordinates of level levels[i]) to the
// original half-plane. levels must be ascending.
void pull_back_all(const Chain& c, std::span<const std::size_t> levels,
                   std::span<Complex> points) noexcept {
  double x[kBatch], y[kBatch];
  for (std::size_t start = 0; start < points.size(); start += kBatch) {
    const std::size_t count = std::min(kBatch, points.size() - start);
    for (std::size_t b = 0; b < count; ++b) {
      x[b] = points[start + b].real();
      y[b] = points[start + b].imag();
    }
    pull_back_batch(c, levels.subspan(start, count), x, y);
    for (std::size_t b = 0; b < count; ++b)
      points[start + b] = {x[b], y[b] < 0.0 ? 0.0 : y[b]};
  }
}

// Point of the slit of level j at fractional time theta, in the coordinates
// of level j - 1.
Complex slit_point(const Chain& c, std::size_t j, double theta) noexcept {
  return c.w[j] + upper_sqrt(Complex(-4.0 * (c.dt[j] * theta), 0.0));
}

// Position on the discrete curve of level j, in the coordinates of level
// j - 1. param in [0, 1) runs along the real segment from W_{j-1} to W_j,
// whose image joins the previous tip to the base of the new slit; param in
// [1, 2] runs up the new slit with theta = param - 1.
struct CurveParam {
  std::size_t level;
  double param;
};

Complex curve_point(const Chain& c, CurveParam p) noexcept {
  if (p.param < 1.0) return {c.w[p.level - 1] + p.param * (c.w[p.level] - c.w[p.level - 1]), 0.0};
  return slit_point(c, p.level, p.param - 1.0);
}

double curve_time(const Chain& c, CurveParam p) noexcept {
  if (p.param < 1.0) return c.t[p.level - 1];
  if (p.param == 2.0) return c.t[p.level];
  return c.t[p.level - 1] + (p.param - 1.0) * c.dt[p.level];
}

std::vector<Complex> evaluate_curve(const Chain& c, std::span<const CurveParam> ps) {
  std::vector<Complex> pts(ps.size());
  std::vector<std::size_t> levels(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    pts[i] = curve_point(c, ps[i]);
    levels[i] = ps[i].level - 1;
  }
  pull_back_all(c, levels, pts);
  return pts;
}

constexpr std::size_t kMaxFillRounds = 40;

}  // namespace

Complex trace_point(const DrivingPath& driving, std::size_t k, double theta,
                    const TraceOptions& options) {
  require(k <= driving.steps(), "trace index out of range");
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  if (k == 0) return {0.0, 0.0};
  const Chain c = build_chain(driving, options.subdivide);
  const std::size_t first = c.end[k - 1] + 1;
  const double m = static_cast<double>(c.end[k] - c.end[k - 1]);
  const double pos = theta * m;  // in (0, m]
  const std::size_t i = std::min(static_cast<std::size_t>(std::ceil(pos)),
                                 c.end[k] - c.end[k - 1]);
  const double sub = pos - static_cast<double>(i - 1);
  const CurveParam p{first + i - 1, sub >= 1.0 ? 2.0 : 1.0 + sub};
  return evaluate_curve(c, std::span(&p, 1)).front();
}

TracePath compute_trace(const DrivingPath& driving, const TraceOptions& options) {
  require(options.refine >= 1, "refine must be >= 1");
  require(options.max_gap >= 0.0, "max_gap must be nonnegative");
  const Chain c = build_chain(driving, options.subdivide);
  const std::size_t levels = c.levels();
  const std::size_t r = options.refine;

  std::vector<CurveParam> params;
  params.reserve(levels * r + 1);
  params.push_back({1, 0.0});  // the origin, start of the first segment
  for (std::size_t j = 1; j <= levels; ++j)
    for (std::size_t i = 1; i <= r; ++i)
      params.push_back({j, i == r ? 2.0 : 1.0 + static_cast<double>(i) / static_cast<double>(r)});
  std::vector<Complex> points = evaluate_curve(c, params);

  // Bisect in the curve parameter wherever consecutive samples are too far
  // apart. Midpoints come out in ascending level order, as pull_back_all needs.
  const double gap_sq = options.max_gap * options.max_gap;
  for (std::size_t round = 0; options.max_gap > 0.0 && round < kMaxFillRounds; ++round) {
    std::vector<std::size_t> after;  // index of the left sample of each split pair
    std::vector<CurveParam> mids;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      if (std::norm(points[i + 1] - points[i]) <= gap_sq) continue;
      const CurveParam a = params[i];
      const CurveParam b = params[i + 1];
      // Across a level boundary the left sample is the previous tip, param 0
      // of the next level.
      const double lo = a.level == b.level ? a.param : 0.0;
      after.push_back(i);
      mids.push_back({b.level, 0.5 * (lo + b.param)});
    }
    if (mids.empty()) break;
    const std::vector<Complex> mid_points = evaluate_curve(c, mids);
    std::vector<CurveParam> next_params;
    std::vector<Complex> next_points;
    next_params.reserve(params.size() + mids.size());
    next_points.reserve(points.size() + mids.size());
    std::size_t m = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      next_params.push_back(params[i]);
      next_points.push_back(points[i]);
      if (m < after.size() && after[m] == i) {
        next_params.push_back(mids[m]);
        next_points.push_back(mid_points[m]);
        ++m;
      }
    }
    params = std::move(next_params);
    points = std::move(next_points);
  }

  TracePath trace;
  trace.kappa = driving.kappa();
  trace.times.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) trace.times[i] = curve_time(c, params[i]);
  trace.times[0] = 0.0;
  trace.points = std::move(points);
  return trace;
}

double trace_distance(const TracePath& trace, Complex z) {
  require(!trace.points.empty(), "trace is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& p : trace.points) best = std::min(best, std::norm(p - z));
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------
// Forward tracking

double TrackedPoint::conformal_radius() const noexcept {
  return image.imag() * std::exp(-log_deriv);
}

namespace {

// Forward state of one point. The derivative modulus is kept as a
// mantissa/exponent pair so that each step costs no logarithm.
struct ForwardState {
  Complex image;
  double deriv_sq = 1.0;  // |g'|^2 mantissa
  int deriv_exp = 0;      // binary exponent of |g'|^2
  bool swallowed = false;

  double log_deriv() const noexcept {
    return 0.5 * (std::log(deriv_sq) + deriv_exp * std::log(2.0));
  }

  // Advances one level; returns true if the point got swallowed in it.
  bool advance(double dt, double dw, double tip_tol, double cut_tol) noexcept {
    const Complex u = image - dw;
    const Complex a = u * u + 4.0 * dt;
    if (a.real() > 0.0 && std::abs(a.imag()) <= cut_tol * a.real()) {
      image = dw + std::sqrt(a.real());
      swallowed = true;
      return true;
    }
    const Complex root = upper_sqrt(a);
    const double root_sq = std::norm(root);
    deriv_sq *= std::norm(u) / root_sq;
    int e = 0;
    deriv_sq = std::frexp(deriv_sq, &e);
    deriv_exp += e;
    image = dw + root;
    if (root_sq < tip_tol * tip_tol || image.imag() <= 0.0) {
      swallowed = true;
      return true;
    }
    return false;
  }
};

}  // namespace

std::vector<TrackedPoint> track_points(const DrivingPath& driving,
                                       std::span<const Complex> zs,
                                       const TrackOptions& options) {
  for (const Complex& z : zs) require(z.imag() > 0.0, "tracked point must have Im z > 0");
  const Chain c = build_chain(driving, options.subdivide);

  std::vector<ForwardState> states(zs.size());
  std::vector<TrackedPoint> out(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    states[i].image = zs[i];
    out[i].origin = zs[i];
  }
  for (std::size_t j = 1; j <= c.levels(); ++j) {
    const double tip_tol = options.swallow_tol * std::sqrt(c.dt[j]);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      ForwardState& s = states[i];
      if (s.swallowed) continue;
      if (s.advance(c.dt[j], c.w[j], tip_tol, options.cut_tol)) out[i].swallowed_at = c.t[j];
    }
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    out[i].image = states[i].image;
    out[i].log_deriv = states[i].log_deriv();
  }
  return out;
}

TrackedPoint track_point(const DrivingPath& driving, Complex z,
                         const TrackOptions& options) {
  return track_points(driving, std::span<const Complex>(&z, 1), options).front();
}

DistanceBounds conformal_distance_bounds(const TrackedPoint& p) {
  if (p.swallowed()) throw StateError("point has been swallowed by the hull");
  const double q = p.conformal_radius();
  return {q / 4.0, 4.0 * q};
}

// ---------------------------------------------------------------------------
// Screened distances

NearTraceResult near_trace_distances(const DrivingPath& driving,
                                     std::span<const Complex> targets, double radius,
                                     const TraceOptions& options) {
  require(radius > 0.0, "radius must be positive");
  require(options.refine >= 1, "refine must be >= 1");
  for (const Complex& z : targets) require(z.imag() > 0.0, "target must have Im z > 0");

  const Chain c = build_chain(driving, options.subdivide);
  const std::size_t n = c.levels();
  const std::size_t refine = options.refine;
  const TrackOptions track;
  const double log_radius = std::log(radius * (1.0 + 1e-9));

  // needed[j]: some target might see a sample of level j within radius.
  // Before level j a target sits at u = g(z) with q = Im u / |g'(z)|, and the
  // level's samples are images under g^{-1} of the segment from W_{j-1} to
  // W_j and the slit W_j + i[0, 2 sqrt(dt_j)]. g^{-1} is univalent on
  // B(u, Im u), so by the growth theorem a point at distance rho Im u from u
  // lands at least q m / (1 + m)^2 away from z, m = min(rho, 1). Once z is
  // swallowed the hull boundary already separates it from every later trace
  // point, so it drops out.
  std::vector<char> needed(n + 1, 0);
  std::vector<ForwardState> states(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) states[i].image = targets[i];
  for (std::size_t j = 1; j <= n; ++j) {
    const double slit = 2.0 * std::sqrt(c.dt[j]);
    const double lo = std::min(c.w[j - 1], c.w[j]);
    const double hi = std::max(c.w[j - 1], c.w[j]);
    bool need = false;
    for (ForwardState& s : states) {
      if (s.swallowed) continue;
      if (!need) {
        const double r = s.image.imag();
        const double dx = std::max({lo - s.image.real(), s.image.real() - hi, 0.0});
        const double dy = std::max(r - slit, 0.0);
        // The segment and slit lie in the rectangle [lo, hi] x [0, slit].
        const double m = std::min(std::hypot(dx, dy) / r, 1.0);
        const double log_bound =
            std::log(r) - s.log_deriv() + std::log(m) - 2.0 * std::log1p(m);
        need = log_bound <= log_radius;
      }
      s.advance(c.dt[j], c.w[j], track.swallow_tol * std::sqrt(c.dt[j]), track.cut_tol);
    }
    needed[j] = need;
  }

  std::vector<double> best(targets.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (std::abs(targets[i]) <= radius) best[i] = std::norm(targets[i]);
  std::vector<CurveParam> params;
  for (std::size_t j = 1; j <= n; ++j) {
    if (!needed[j]) continue;
    // The base lies on the earlier curve; it only anchors the mesh.
    for (std::size_t i = 0; i <= refine; ++i)
      params.push_back(
          {j, i == refine ? 2.0 : 1.0 + static_cast<double>(i) / static_cast<double>(refine)});
  }
  const std::vector<Complex> points = evaluate_curve(c, params);

  NearTraceResult res;
  res.evaluated = points.size();
  const double near_sq = 4.0 * radius * radius;
  auto is_near = [&](const Complex& p) {
    for (const Complex& z : targets)
      if (std::norm(p - z) <= near_sq) return true;
    return false;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Complex& p = points[i];
    for (std::size_t t = 0; t < targets.size(); ++t)
      best[t] = std::min(best[t], std::norm(p - targets[t]));
    if (i > 0 && params[i].level == params[i - 1].level && (is_near(p) || is_near(points[i - 1])))
      res.local_mesh = std::max(res.local_mesh, std::abs(p - points[i - 1]));
  }
  for (double& b : best) b = std::sqrt(b);
  res.distances = std::move(best);
  return res;
}

}  // namespace sle
