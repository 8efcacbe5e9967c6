#include "qdft/rng.hpp"

namespace qdft {

std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = splitmix64_mix(seed ^ 0x6a09e667f3bcc909ULL);
  for (auto id : path) {
    key = splitmix64_mix(key + 0x9e3779b97f4a7c15ULL * (id + 1));
  }
  return key;
}

}  // namespace qdft
