#pragma once

#include <cstdint>

namespace qssp {

/// SplitMix64 generator. Every stochastic choice in the library (random
/// placement, RANDOM and LOCAL_GREEDY picks) draws from this stream so that
/// a seed reproduces the same trace on any platform or in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Derived draws:
///   uniform01()  = (next() >> 11) * 2^-53            in [0, 1)
///   index(n)     = (next() * n) >> 64  (128-bit product), in [0, n)
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t index(std::uint64_t n) {
    const unsigned __int128 product = static_cast<unsigned __int128>(next()) * n;
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Per-slot seed derivation: the first output of SplitMix64(seed + slot * golden).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t slot) {
  SplitMix64 g(seed + slot * 0x9E3779B97F4A7C15ULL);
  return g.next();
}

}  // namespace qssp
