#pragma once

#include <cstdint>
#include <random>

namespace decosim::rng {

// SplitMix64 output function (Steele/Lea/Flood). Stateless mix of a 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream-splitting rule: the seed of stream `index` under `master` is
// splitmix64(master + (index + 1) * golden). Documented in the README;
// every module that consumes multiple independent streams derives them
// this way so a single master seed reproduces an entire run.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ull);
}

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace decosim::rng
