#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "sle/error.hpp"
#include "sle/partition.hpp"

using namespace sle;

TEST_CASE("k1 = k2 = 1 by hand") {
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  for_each_composition_pair(1, 1, [&](const CompositionPair& p) { seen.insert({p.m, p.l}); });
  const std::set<std::pair<std::vector<int>, std::vector<int>>> expected{
      {{1}, {1}}, {{0, 1}, {1, 0}}};
  CHECK(seen == expected);
  const PartitionWeights w;
  // (1),(1): c a^2. (0,1),(1,0): c^2 a^(1 + 1 + 1).
  CHECK(partition_sum(1, 1, w) == doctest::Approx(2 * 0.05 * 0.05 + 4 * std::pow(0.05, 3)));
}

TEST_CASE("pair counts are binomial") {
  for (int k1 = 1; k1 <= 6; ++k1)
    for (int k2 = 1; k2 <= 6; ++k2) {
      std::uint64_t n = 0;
      for_each_composition_pair(k1, k2, [&](const CompositionPair&) { ++n; });
      CHECK(n == composition_pair_count(k1, k2));
    }
}

TEST_CASE("enumeration matches the dynamic-programming oracle exactly") {
  for (int k1 = 1; k1 <= 6; ++k1)
    for (int k2 = 1; k2 <= 6; ++k2) {
      const PartitionPolynomial poly = enumerate_partition_polynomial(k1, k2);
      const auto dp = oracle::composition_pair_counts(k1, k2);
      for (std::size_t len = 0; len < poly.counts.size(); ++len)
        for (std::size_t l = 0; l < poly.counts[len].size(); ++l) {
          const std::uint64_t mine = poly.counts[len][l];
          std::uint64_t theirs = 0;
          if (const auto a = dp.find(static_cast<int>(len)); a != dp.end())
            if (const auto b = a->second.find(static_cast<long long>(l)); b != a->second.end())
              theirs = b->second;
          CHECK(mine == theirs);
        }
      std::uint64_t dp_total = 0;
      for (const auto& [len, by_l] : dp)
        for (const auto& [l, c] : by_l) dp_total += c;
      CHECK(dp_total == poly.total_pairs());
      const PartitionWeights w;
      CHECK(partition_sum(k1, k2, w) ==
            doctest::Approx(oracle::composition_pair_sum(k1, k2, w.a, w.c, w.alpha, w.beta,
                                                         w.gamma))
                .epsilon(1e-12));
    }
}

TEST_CASE("sums decrease with a and respect the budget") {
  PartitionWeights lo, hi;
  lo.a = 0.02;
  hi.a = 0.05;
  for (int k = 1; k <= 5; ++k) CHECK(partition_sum(k, k + 1, lo) < partition_sum(k, k + 1, hi));
  CHECK_THROWS_AS(partition_sum(12, 12, hi, 1000), ResourceError);
  PartitionWeights bad;
  bad.a = 1.5;
  CHECK_THROWS_AS(partition_sum(2, 2, bad), ParameterError);
}
