#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sle/error.hpp"
#include "sle/estimators.hpp"

using namespace sle;

namespace {
constexpr double kPi = std::numbers::pi;

EnsembleConfig small_config() {
  EnsembleConfig c;
  c.horizon = 1.0;
  c.steps = 300;
  c.refine = 2;
  return c;
}
}  // namespace

TEST_CASE("harmonic measure examples") {
  CHECK(harmonic_measure_pos_axis(Complex(0, 1)) == doctest::Approx(0.5));
  CHECK(harmonic_measure_pos_axis(Complex(1, 1)) == doctest::Approx(0.75));
  CHECK(harmonic_measure_pos_axis(Complex(-1, 1)) == doctest::Approx(0.25));
  CHECK(min_side_measure(Complex(0, 1)) == doctest::Approx(0.5));
  CHECK(min_side_measure(Complex(1, 1)) == doctest::Approx(0.25));
  const double x = 1e4;
  CHECK(min_side_measure(Complex(x, 1)) / std::sin(std::arg(Complex(x, 1))) ==
        doctest::Approx(1 / kPi).epsilon(1e-3));
  CHECK_THROWS_AS(harmonic_measure_pos_axis(Complex(1, 0)), ParameterError);
}

TEST_CASE("harmonic measure matches Cauchy quadrature") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-5.0, 5.0), uy(0.05, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng), y = uy(rng);
    worst = std::max(worst, std::abs(harmonic_measure_pos_axis(Complex(x, y)) -
                                     oracle::cauchy_mass_positive_axis(x, y)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("phi1 examples") {
  CHECK(phi1(Complex(0, 1), 3.0) == doctest::Approx(1.0));
  CHECK(phi1(Complex(0, 2), 2.0) == doctest::Approx(std::pow(2.0, -0.75)));
  CHECK_THROWS_AS(phi1(Complex(0, 1), 8.0), ParameterError);
}

TEST_CASE("hitting estimates: binomial errors, nesting, validation") {
  const std::vector<double> eps{0.4, 0.2, 0.1};
  const HittingEstimate e =
      hitting_probability_mc(Complex(0, 1), eps, 2.0, 200, small_config(), 5);
  for (std::size_t i = 0; i < eps.size(); ++i)
    CHECK(e.stderrs[i] == std::sqrt(e.probs[i] * (1 - e.probs[i]) / 200));
  CHECK(e.probs[0] >= e.probs[1]);
  CHECK(e.probs[1] >= e.probs[2]);
  // Containment: a radius reaching the origin is always hit.
  const std::vector<double> big{0.999};
  const HittingEstimate all =
      hitting_probability_mc(Complex(0, 1), big, 2.0, 50, small_config(), 5);
  CHECK(all.probs[0] == 1.0);
  const std::vector<double> bad{1.5};
  CHECK_THROWS_AS(hitting_probability_mc(Complex(0, 1), bad, 2.0, 10, small_config(), 1),
                  ParameterError);
  const std::vector<double> none;
  CHECK_THROWS_AS(hitting_probability_mc(Complex(0, 1), none, 2.0, 10, small_config(), 1),
                  ParameterError);
}

TEST_CASE("thread count does not change ensembles") {
  const std::vector<double> eps{0.3, 0.15};
  EnsembleConfig a = small_config(), b = small_config();
  a.threads = 1;
  b.threads = 4;
  const auto x = hitting_probability_mc(Complex(0.2, 0.9), eps, 6.0, 60, a, 17);
  const auto y = hitting_probability_mc(Complex(0.2, 0.9), eps, 6.0, 60, b, 17);
  CHECK(x.probs == y.probs);
}

TEST_CASE("two-point joint probability is below the marginals") {
  const std::vector<PointPair> pairs{{Complex(-0.25, 1), Complex(0.25, 1)},
                                     {Complex(-0.5, 1), Complex(0.5, 1)}};
  const std::vector<double> eps{0.1, 0.2};
  const auto t = two_point_table(pairs, eps, 8.0 / 3.0, 150, small_config(), 3);
  for (const auto& row : t)
    for (const TwoPointEstimate& e : row) {
      CHECK(e.prob <= std::min(e.prob_z, e.prob_zp));
      CHECK(e.std_error == std::sqrt(e.prob * (1 - e.prob) / 150));
    }
  // A far away partner is never reached.
  const TwoPointEstimate far = two_point_mc(Complex(0, 1), Complex(500, 1), 0.2, 8.0 / 3.0, 50,
                                            small_config(), 2);
  CHECK(far.prob == 0.0);
  CHECK_THROWS_AS(two_point_mc(Complex(0, 1), Complex(0.1, 1), 0.1, 2.0, 5, small_config(), 1),
                  ParameterError);
}

TEST_CASE("angle profile validation and output shape") {
  const std::vector<double> angles{kPi / 4, kPi / 2, 3 * kPi / 4};
  const auto r = angle_profile(6.0, 1.0, angles, 0.2, 40, small_config(), 1);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r[i].angle == angles[i]);
  const std::vector<double> flat{0.05};
  CHECK_THROWS_AS(angle_profile(6.0, 1.0, flat, 0.2, 10, small_config(), 1), ParameterError);
}

TEST_CASE("occupation density") {
  TracePath t;
  t.kappa = 8.0 / 3.0;
  for (int k = 0; k <= 200; ++k) {
    t.points.emplace_back(0.0, 0.01 * k);
    t.times.push_back(k);
  }
  // Far from the window: zero everywhere.
  const DensityGrid far = occupation_density(t, 0.05, {5, 6, 0.5, 1.5}, 4);
  for (const double v : far.values) CHECK(v == 0.0);
  // Strip of width 2 eps around the segment: mass eps^-s * 2 eps * height.
  const double eps = 0.05;
  const DensityGrid g = occupation_density(t, eps, {-0.5, 0.5, 0.5, 1.5}, 20, 16);
  const double s = hull_exponent(t.kappa);
  CHECK(g.total_mass() == doctest::Approx(std::pow(eps, -s) * 2 * eps * 1.0).epsilon(0.05));
}
