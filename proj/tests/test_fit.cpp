#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sle/error.hpp"
#include "sle/fit.hpp"

using namespace sle;

TEST_CASE("exact laws") {
  const std::vector<double> xs{1, 2, 4, 8, 16};
  const PowerLawFit id = fit_power_law(xs, xs);
  CHECK(id.slope == doctest::Approx(1.0));
  CHECK(id.r_squared == doctest::Approx(1.0));
  std::vector<double> ys;
  for (const double x : xs) ys.push_back(3 * std::pow(x, -0.75));
  const PowerLawFit f = fit_power_law(xs, ys);
  CHECK(f.slope == doctest::Approx(-0.75));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("zero counts are dropped and reported") {
  const std::vector<double> xs{1, 2, 4, 8};
  const std::vector<double> ys{1, 0.5, 0.0, 0.125};
  const PowerLawFit f = fit_power_law(xs, ys);
  CHECK(f.dropped == 1);
  CHECK(f.n_points == 3);
  CHECK(f.slope == doctest::Approx(-1.0));
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(fit_power_law(two, two), DataError);
}

TEST_CASE("exponential decay fit") {
  std::vector<double> s, p;
  for (int i = 1; i <= 6; ++i) {
    s.push_back(i);
    p.push_back(0.4 * std::exp(-0.3 * i));
  }
  CHECK(-fit_exponential_decay(s, p).slope == doctest::Approx(0.3));
}

TEST_CASE("stderr calibration on noisy synthetic laws") {
  std::mt19937_64 rng(77);
  std::vector<double> xs;
  for (int i = 0; i < 8; ++i) xs.push_back(std::pow(2.0, i));
  int covered = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const auto ys = oracle::noisy_power_law(xs, 2.0, 0.5, 0.1, rng);
    const PowerLawFit f = fit_power_law(xs, ys);
    covered += std::abs(f.slope - 0.5) <= 2 * f.slope_stderr;
  }
  CHECK(covered >= 900);
}

TEST_CASE("common slope fit") {
  // Two lines with slope -2 and different intercepts.
  std::vector<FitGroup> g(2);
  for (int i = 0; i < 4; ++i) {
    g[0].xs.push_back(i);
    g[0].ys.push_back(1.0 - 2.0 * i);
    g[0].weights.push_back(1.0);
    g[1].xs.push_back(i + 0.5);
    g[1].ys.push_back(-4.0 - 2.0 * (i + 0.5));
    g[1].weights.push_back(2.0);
  }
  const LinearFit f = fit_common_slope(g);
  CHECK(f.slope == doctest::Approx(-2.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  // Inverse-variance weights: stderr = 1 / sqrt(sum w dx^2) = 1 / sqrt(15).
  CHECK(f.slope_stderr == doctest::Approx(1.0 / std::sqrt(5.0 + 10.0)));
  std::vector<FitGroup> flat(1);
  flat[0] = {{1, 1, 1}, {1, 2, 3}, {1, 1, 1}};
  CHECK_THROWS_AS(fit_common_slope(flat), DataError);
}
