#pragma once

// Reference computations that share no code with the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Trace of constant zero driving: the vertical slit 2i sqrt(t).
inline Complex zero_trace(double t) { return Complex(0.0, 2.0 * std::sqrt(t)); }

/// Forward flow of zero driving in closed form: sqrt(z^2 + 4t), upper root.
inline Complex zero_flow(Complex z, double t) {
  Complex r = std::sqrt(z * z + 4.0 * t);
  return r.imag() < 0.0 ? -r : r;
}

/// Exact distance from z to the segment [0, top i] union the real line.
inline double slit_and_axis_distance(Complex z, double top) {
  const double y = std::clamp(z.imag(), 0.0, top);
  return std::min(z.imag(), std::abs(z - Complex(0.0, y)));
}

/// (1/pi) int_0^inf y / (y^2 + (u - x)^2) du by adaptive Gauss-Kronrod,
/// split at the peak u = x.
inline double cauchy_mass_positive_axis(double x, double y) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [x, y](double u) { return y / (y * y + (u - x) * (u - x)); };
  const double split = std::max(x, 0.0);
  double head = 0.0;
  if (split > 0.0) head = gauss_kronrod<double, 61>::integrate(f, 0.0, split, 12, 1e-15);
  const double tail = gauss_kronrod<double, 61>::integrate(
      f, split, std::numeric_limits<double>::infinity(), 12, 1e-15);
  return (head + tail) / std::numbers::pi;
}

/// Independent count of composition pairs by dynamic programming.
///
/// For length I the m side contributes C(k1, I-1) choices (compositions of
/// k1 into I parts, the first allowed to be 0). The l side carries the prefix
/// total L = sum_{i < I} (I - i) l_i with l_i >= 1 for i < I and l_I >= 0.
/// Returns counts[I][L].
inline std::map<int, std::map<long long, std::uint64_t>> composition_pair_counts(int k1, int k2) {
  auto binom = [](int n, int r) {
    if (r < 0 || r > n) return std::uint64_t{0};
    std::uint64_t c = 1;
    for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / i;
    return c;
  };
  std::map<int, std::map<long long, std::uint64_t>> out;
  for (int len = 1; len <= k2 + 1; ++len) {
    const std::uint64_t m_ways = binom(k1, len - 1);
    if (m_ways == 0) continue;
    // ways[s][L] after placing l_1 .. l_i with sum s.
    std::vector<std::map<long long, std::uint64_t>> ways(k2 + 1);
    ways[0][0] = 1;
    for (int i = 1; i < len; ++i) {
      std::vector<std::map<long long, std::uint64_t>> next(k2 + 1);
      for (int s = 0; s <= k2; ++s)
        for (const auto& [l_total, c] : ways[s])
          for (int v = 1; s + v <= k2; ++v)
            next[s + v][l_total + static_cast<long long>(len - i) * v] += c;
      ways = std::move(next);
    }
    // The last part takes whatever is left, possibly 0.
    for (int s = 0; s <= k2; ++s)
      for (const auto& [l_total, c] : ways[s])
        out[len][l_total] += c * m_ways;
  }
  return out;
}

/// sum of counts[I][L] a^(alpha k1 + beta k2 + gamma L) c^I.
inline double composition_pair_sum(int k1, int k2, double a, double c, double alpha, double beta,
                                   double gamma) {
  double total = 0.0;
  for (const auto& [len, by_l] : composition_pair_counts(k1, k2))
    for (const auto& [l_total, count] : by_l)
      total += static_cast<double>(count) *
               std::pow(a, alpha * k1 + beta * k2 + gamma * static_cast<double>(l_total)) *
               std::pow(c, len);
  return total;
}

/// Distinct grid cells by an ordered set.
inline std::size_t cells_touched(const std::vector<Complex>& pts, double eps) {
  std::set<std::pair<long long, long long>> cells;
  for (const Complex& p : pts)
    cells.emplace(static_cast<long long>(std::floor(p.real() / eps)),
                  static_cast<long long>(std::floor(p.imag() / eps)));
  return cells.size();
}

/// Synthetic power law y = c x^slope with multiplicative lognormal noise.
inline std::vector<double> noisy_power_law(const std::vector<double>& xs, double c, double slope,
                                           double noise, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, noise);
  std::vector<double> ys;
  for (const double x : xs) ys.push_back(c * std::pow(x, slope) * std::exp(n(rng)));
  return ys;
}

}  // namespace oracle
