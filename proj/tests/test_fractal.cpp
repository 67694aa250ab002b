#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sle/error.hpp"
#include "sle/fractal.hpp"

using namespace sle;

TEST_CASE("box_count examples") {
  const std::vector<Complex> one{Complex(0.3, 0.7)};
  for (const double e : {1.0, 0.1, 0.001}) CHECK(box_count(one, e) == 1);
  std::vector<Complex> seg;
  for (int k = 0; k <= 20000; ++k) seg.emplace_back(0.0, 2.0 * k / 20000.0);
  for (const double e : {0.3, 0.1, 0.07, 0.01}) {
    const double n = static_cast<double>(box_count(seg, e));
    CHECK(std::abs(n - std::ceil(2.0 / e)) <= 1.0);
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> cloud;
  for (int i = 0; i < 10000; ++i) cloud.emplace_back(u(rng), u(rng));
  CHECK(box_count(cloud, 0.1) == 100);
  CHECK_THROWS_AS(box_count(one, 0.0), ParameterError);
}

TEST_CASE("box_count agrees with an ordered-set count") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> pts;
  for (int i = 0; i < 5000; ++i) pts.emplace_back(n(rng), std::abs(n(rng)));
  for (const double e : {0.5, 0.05, 0.013}) CHECK(box_count(pts, e) == oracle::cells_touched(pts, e));
}

TEST_CASE("segment control has dimension one") {
  TraceOptions o;
  o.max_gap = 0.001;
  const TracePath seg = compute_trace(DrivingPath::zero(2.0, 1.0, 100), o);
  std::vector<double> eps;
  for (int i = 6; i <= 14; ++i) eps.push_back(std::exp2(-0.5 * i));
  const DimensionReport r = dimension_fit(seg, eps);
  CHECK(r.d_hat() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dimension_fit refuses coarse traces and narrow ranges") {
  const TracePath coarse = compute_trace(DrivingPath::zero(2.0, 1.0, 10));
  const std::vector<double> eps{0.2, 0.05, 0.01};
  CHECK_THROWS_AS(dimension_fit(coarse, eps), ResolutionError);
  const std::vector<double> narrow{0.2, 0.1, 0.05};
  CHECK_THROWS_AS(dimension_fit(coarse, narrow), ParameterError);
  CHECK_THROWS_AS(auto_eps_range(coarse), ResolutionError);
}

TEST_CASE("auto_eps_range spans the usable scales") {
  TraceOptions o;
  o.max_gap = 0.002;
  const TracePath t = compute_trace(sample_driving(8.0 / 3.0, 1.0, 2000, 4), o);
  const auto eps = auto_eps_range(t, 6);
  REQUIRE(eps.size() == 6);
  CHECK(eps.back() == doctest::Approx(5 * t.mesh()));
  CHECK(eps.front() == doctest::Approx(t.diameter() / 4));
  const DimensionReport r = dimension_fit(t, eps);
  CHECK(r.d_hat() > 1.0);
  CHECK(r.d_hat() < 1.6);
}

TEST_CASE("swallow diagnostics") {
  const auto grid = standard_swallow_grid();
  CHECK(grid.size() == 231);
  CHECK(swallow_fraction(6.0, grid, 0.0, 100, 1) == 0.0);
  CHECK(swallow_fraction(2.0, grid, 5.0, 2000, 1) == 0.0);
  double swallowed = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) swallowed += swallow_fraction(9.0, grid, 5.0, 2000, seed);
  CHECK(swallowed > 0.0);
}
