#pragma once

// Sums over pairs of ordered compositions (m, l) with |m| = |l|, as they
// arise when splitting a two-disk hitting event by the order in which the
// trace crosses the circles around each point.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace sle {

/// m is a composition of k1 and l a composition of k2 with the same number
/// of parts I. All parts are positive except that m[0] and l[I-1] may be 0.
struct CompositionPair {
  std::vector<int> m;
  std::vector<int> l;

  std::size_t length() const noexcept { return m.size(); }
  /// Sum of the prefix sums l_1 + ... + l_i for i = 1 .. I-1.
  long long prefix_total() const noexcept;
};

/// Number of pairs for (k1, k2): C(k1 + k2, k1).
std::uint64_t composition_pair_count(int k1, int k2);

/// Calls visit(pair) for every CompositionPair of (k1, k2), ordered by
/// length, then lexicographically in m, then in l.
void for_each_composition_pair(int k1, int k2,
                               const std::function<void(const CompositionPair&)>& visit);

struct PartitionWeights {
  double a = 0.05;
  double c = 2.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};

/// The sum as a polynomial: counts[I][L] is the number of pairs of length I
/// whose prefix total is L. Every pair contributes
/// a^(alpha k1 + beta k2 + gamma L) c^I.
struct PartitionPolynomial {
  int k1 = 0;
  int k2 = 0;
  std::vector<std::vector<std::uint64_t>> counts;

  double evaluate(const PartitionWeights& w) const;
  std::uint64_t total_pairs() const noexcept;
  friend bool operator==(const PartitionPolynomial&, const PartitionPolynomial&) = default;
};

inline constexpr std::uint64_t kDefaultPartitionBudget = 10'000'000;

/// Builds the polynomial by visiting every pair. Throws ResourceError when
/// the number of pairs exceeds `budget`.
PartitionPolynomial enumerate_partition_polynomial(
    int k1, int k2, std::uint64_t budget = kDefaultPartitionBudget);

/// Sum over all pairs of a^(alpha sum(m) + beta sum(l) + gamma sum(l+)) c^|l|.
/// Requires 0 < a < 1, c > 0, positive exponents and k1, k2 >= 1.
double partition_sum(int k1, int k2, const PartitionWeights& w,
                     std::uint64_t budget = kDefaultPartitionBudget);

/// partition_sum / a^(alpha k1 / 2 + beta k2).
double partition_ratio(int k1, int k2, const PartitionWeights& w,
                       std::uint64_t budget = kDefaultPartitionBudget);

}  // namespace sle
