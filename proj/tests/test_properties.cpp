// Invariants checked over many random inputs.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sle/diffusion.hpp"
#include "sle/estimators.hpp"
#include "sle/fractal.hpp"
#include "sle/loewner.hpp"

using namespace sle;

namespace {
constexpr double kPi = std::numbers::pi;
const double kKappas[] = {2.0, 8.0 / 3.0, 4.0, 6.0};
}  // namespace

TEST_CASE("capacity expansion g_T(z) = z + 2T/z + O(|z|^-2)") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DrivingPath d = sample_driving(kKappas[seed % 4], 1.0, 200, seed);
    double err[2];
    int i = 0;
    for (const double r : {1e2, 1e3}) {
      const Complex z = std::polar(r, 1.1);
      err[i++] = std::abs(track_point(d, z).image - z - 2.0 * d.horizon() / z) * r * r;
    }
    // Scaled by |z|^2 the remainder stays bounded and does not grow.
    CHECK(err[0] < 50.0);
    CHECK(err[1] <= 1.1 * err[0] + 1e-3);
  }
}

TEST_CASE("reflected driving mirrors the trace exactly") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    TraceOptions o;
    o.refine = 1 + seed % 3;
    const DrivingPath d = sample_driving(kKappas[seed % 4], 1.0, 300, seed);
    const TracePath a = compute_trace(d, o);
    const TracePath b = compute_trace(d.reflected(), o);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(b.points[k].real() == -a.points[k].real());
      CHECK(b.points[k].imag() == a.points[k].imag());
    }
  }
}

TEST_CASE("Loewner scaling (dt, W) -> (lambda^2 dt, lambda W) scales the trace") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const double lambda = 0.5 + 0.4 * static_cast<double>(seed);
    const DrivingPath d = sample_driving(kKappas[seed % 4], 1.0, 300, seed);
    const TracePath a = compute_trace(d);
    const TracePath b = compute_trace(d.scaled(lambda));
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(std::abs(b.points[k] - lambda * a.points[k]) <= 1e-12 * lambda * (1 + std::abs(a.points[k])));
  }
}

TEST_CASE("traces stay in the closed upper half-plane and refine with n") {
  double prev_mesh = INFINITY;
  for (const std::size_t n : {500u, 2000u, 8000u}) {
    // Same Brownian path at each resolution: coarse samples of a fine walk.
    const DrivingPath fine = sample_driving(8.0 / 3.0, 1.0, 8000, 9);
    std::vector<double> w;
    for (std::size_t k = 0; k <= n; ++k) w.push_back(fine[k * (8000 / n)]);
    const TracePath t = compute_trace(DrivingPath(8.0 / 3.0, 1.0 / static_cast<double>(n), w));
    for (const Complex& p : t.points) CHECK(p.imag() >= 0.0);
    CHECK(t.mesh() < prev_mesh);
    prev_mesh = t.mesh();
  }
}

TEST_CASE("Im g_t(z) is nonincreasing until swallowing") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const double kappa = kKappas[seed % 4];
    const DrivingPath d = sample_driving(kappa, 2.0, 120, seed);
    const auto values = d.values();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.1, 1.5);
    const Complex z(ux(rng), uy(rng));
    double prev = z.imag();
    for (std::size_t k = 1; k <= d.steps(); ++k) {
      const DrivingPath prefix(kappa, d.dt(), std::vector<double>(values.begin(), values.begin() + k + 1));
      const TrackedPoint p = track_point(prefix, z);
      if (p.swallowed()) break;
      CHECK(p.image.imag() <= prev + 1e-15);
      prev = p.image.imag();
    }
  }
}

TEST_CASE("conformal bounds contain the distance to trace and axis") {
  int inside = 0, total = 0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(0.2, 2.0);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const double kappa = std::array{2.0, 8.0 / 3.0, 6.0}[seed % 3];
    const DrivingPath d = sample_driving(kappa, 1.0, 400, seed);
    TraceOptions o;
    o.max_gap = 0.005;
    const TracePath t = compute_trace(d, o);
    for (int i = 0; i < 5; ++i) {
      const Complex z(ux(rng), uy(rng));
      const TrackedPoint p = track_point(d, z);
      if (p.swallowed()) continue;
      const double dist = std::min(trace_distance(t, z), z.imag());
      const DistanceBounds b = conformal_distance_bounds(p);
      inside += b.lower <= dist && dist <= b.upper;
      ++total;
    }
  }
  CHECK(inside >= 0.99 * total);
}

TEST_CASE("alpha is symmetric about pi and concentrates given survival") {
  for (const double kappa : kKappas) {
    const int n = 3000;
    double sum = 0.0, sq = 0.0;
    int alive = 0, central = 0;
    for (int i = 0; i < n; ++i) {
      const AlphaPath p = simulate_alpha(kappa, kPi, 1.0, 1e-3, 50'000 + i);
      if (p.absorbed_at) continue;
      const double a = p.samples.back();
      ++alive;
      sum += a;
      sq += a * a;
      central += a >= kPi / 2 && a <= 3 * kPi / 2;
    }
    REQUIRE(alive > 30);
    const double mean = sum / alive;
    const double se = std::sqrt((sq / alive - mean * mean) / alive);
    CHECK(std::abs(mean - kPi) <= 3.0 * se);
    CHECK(static_cast<double>(central) / alive >= 0.3);
  }
}

TEST_CASE("survival curves are nonincreasing") {
  const std::vector<double> grid{0.1, 0.3, 0.6, 1.0, 1.5, 2.5};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const double alpha0 = 0.3 + 0.9 * static_cast<double>(seed);
    const auto e = survival_curve(kKappas[seed % 4], alpha0, grid, 300, 2e-3, seed, 1);
    for (std::size_t j = 1; j < grid.size(); ++j) CHECK(e.probs[j] <= e.probs[j - 1]);
  }
}

TEST_CASE("box counts: shift robustness, scaling, bounds") {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TraceOptions o;
    o.max_gap = 0.01;
    const TracePath t = compute_trace(sample_driving(kKappas[seed % 4], 1.0, 500, seed), o);
    for (const double e : {0.3, 0.1, 0.03}) {
      const double n0 = static_cast<double>(box_count(t.points, e));
      const double n1 = static_cast<double>(box_count(t.points, e, Complex(e / 2, e / 2)));
      CHECK(n1 <= 4 * n0);
      CHECK(n0 <= 4 * n1);
      CHECK(n0 >= 1);
      CHECK(n0 <= std::pow(t.diameter() / e + 2, 2));
      // Powers of two scale without rounding.
      std::vector<Complex> scaled;
      for (const Complex& p : t.points) scaled.push_back(8.0 * p);
      CHECK(box_count(scaled, 8.0 * e) == box_count(t.points, e));
    }
    const std::vector<double> eps{0.4, 0.2, 0.1, 0.05, 0.025};
    const BoxCountTable tab = box_count_table(t.points, eps);
    for (std::size_t j = 1; j < tab.counts.size(); ++j) CHECK(tab.counts[j] >= tab.counts[j - 1]);
  }
}

TEST_CASE("hit indicators nest in eps and stderr is binomial") {
  EnsembleConfig c;
  c.horizon = 1.0;
  c.steps = 200;
  c.refine = 2;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const std::vector<double> eps{0.35, 0.25, 0.15, 0.05};
    const auto e = hitting_probability_mc(Complex(0.3, 0.8), eps, kKappas[seed % 4], 80, c, seed);
    for (std::size_t j = 1; j < eps.size(); ++j) CHECK(e.probs[j] <= e.probs[j - 1]);
    for (std::size_t j = 0; j < eps.size(); ++j)
      CHECK(e.stderrs[j] == std::sqrt(e.probs[j] * (1 - e.probs[j]) / 80));
  }
}
