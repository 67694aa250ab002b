#pragma once

#include <cstdint>
#include <limits>

namespace sle {

/// SplitMix64 finalizer. A bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream used by path `index` of an ensemble.
///
/// Every ensemble in the library derives the stream of path i as
/// stream_seed(master_seed, i), so ensemble statistics can be reproduced
/// from (master_seed, n_paths) alone, whatever the number of threads.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Counter-based generator: the i-th output is mix64(key + i * golden).
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions. Jumping ahead is O(1) via discard().
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  void discard(std::uint64_t n) noexcept { counter_ += n; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sle
