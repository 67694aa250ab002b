#include "sle/rng.hpp"

namespace sle {

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(mix64(master_seed) ^ mix64(index + 0xd1b54a32d192ed03ULL));
}

}  // namespace sle
