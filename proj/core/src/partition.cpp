#include "sle/partition.hpp"

#include <cmath>

#include "sle/error.hpp"

namespace sle {

long long CompositionPair::prefix_total() const noexcept {
  long long running = 0, total = 0;
  for (std::size_t i = 0; i + 1 < l.size(); ++i) {
    running += l[i];
    total += running;
  }
  return total;
}

std::uint64_t composition_pair_count(int k1, int k2) {
  require(k1 >= 0 && k2 >= 0, "k1 and k2 must be nonnegative");
  // C(k1 + k2, min(k1, k2)); exact while it fits in 64 bits.
  const int n = k1 + k2;
  const int r = std::min(k1, k2);
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - r + i);
    if (c > UINT64_MAX / num) return UINT64_MAX;
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

namespace {

// Fills parts[pos..] with a composition of `remaining`, where parts at index
// `free_index` may be zero and all others must be positive.
void compose(std::vector<int>& parts, std::size_t pos, int remaining, std::size_t free_index,
             const std::function<void()>& done) {
  const std::size_t n = parts.size();
  if (pos + 1 == n) {
    if (remaining > 0 || pos == free_index) {
      parts[pos] = remaining;
      done();
    }
    return;
  }
  // Leave at least one unit for each later positive part.
  std::size_t later_positive = 0;
  for (std::size_t q = pos + 1; q < n; ++q) later_positive += q != free_index;
  const int lowest = pos == free_index ? 0 : 1;
  for (int v = lowest; v <= remaining - static_cast<int>(later_positive); ++v) {
    parts[pos] = v;
    compose(parts, pos + 1, remaining - v, free_index, done);
  }
}

}  // namespace

void for_each_composition_pair(int k1, int k2,
                               const std::function<void(const CompositionPair&)>& visit) {
  require(k1 >= 1 && k2 >= 1, "k1 and k2 must be >= 1");
  CompositionPair pair;
  const int max_len = std::min(k1, k2) + 1;
  for (int len = 1; len <= max_len; ++len) {
    const auto n = static_cast<std::size_t>(len);
    pair.m.assign(n, 0);
    pair.l.assign(n, 0);
    compose(pair.m, 0, k1, 0, [&] {
      compose(pair.l, 0, k2, n - 1, [&] { visit(pair); });
    });
  }
}

PartitionPolynomial enumerate_partition_polynomial(int k1, int k2, std::uint64_t budget) {
  require(k1 >= 1 && k2 >= 1, "k1 and k2 must be >= 1");
  const std::uint64_t count = composition_pair_count(k1, k2);
  if (count > budget)
    throw ResourceError("partition enumeration needs " + std::to_string(count) +
                        " terms, over the budget of " + std::to_string(budget));
  PartitionPolynomial poly;
  poly.k1 = k1;
  poly.k2 = k2;
  const int max_len = std::min(k1, k2) + 1;
  poly.counts.resize(static_cast<std::size_t>(max_len) + 1);
  for_each_composition_pair(k1, k2, [&](const CompositionPair& p) {
    auto& row = poly.counts[p.length()];
    const auto total = static_cast<std::size_t>(p.prefix_total());
    if (row.size() <= total) row.resize(total + 1, 0);
    ++row[total];
  });
  return poly;
}

std::uint64_t PartitionPolynomial::total_pairs() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : counts)
    for (const std::uint64_t v : row) n += v;
  return n;
}

double PartitionPolynomial::evaluate(const PartitionWeights& w) const {
  require(w.a > 0.0 && w.a < 1.0, "a must lie in (0, 1)");
  require(w.c > 0.0, "c must be positive");
  require(w.alpha > 0.0 && w.beta > 0.0 && w.gamma > 0.0, "exponents must be positive");
  const double log_a = std::log(w.a);
  const double log_c = std::log(w.c);
  const double base = w.alpha * k1 + w.beta * k2;
  double sum = 0.0;
  for (std::size_t len = 0; len < counts.size(); ++len) {
    for (std::size_t total = 0; total < counts[len].size(); ++total) {
      const std::uint64_t n = counts[len][total];
      if (n == 0) continue;
      const double exponent = (base + w.gamma * static_cast<double>(total)) * log_a +
                              static_cast<double>(len) * log_c;
      sum += static_cast<double>(n) * std::exp(exponent);
    }
  }
  return sum;
}

double partition_sum(int k1, int k2, const PartitionWeights& w, std::uint64_t budget) {
  return enumerate_partition_polynomial(k1, k2, budget).evaluate(w);
}

double partition_ratio(int k1, int k2, const PartitionWeights& w, std::uint64_t budget) {
  const double s = partition_sum(k1, k2, w, budget);
  return s / std::pow(w.a, w.alpha * k1 / 2.0 + w.beta * k2);
}

}  // namespace sle
