#pragma once

#include <cstdint>

namespace torusdyn {

// SplitMix64: the 64-bit mixing recurrence used for all reproducible
// randomness in this project (initial points, stratified jitter,
// per-parameter sub-seeds).  Reference: Steele, Lea, Flood (2014).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits of mantissa.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix64(std::uint64_t v) {
  SplitMix64 g(v);
  return g.next();
}

// Deterministic sub-seed derivation: hash a stream of words into one seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
  return mix64(master ^ mix64(a + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

}  // namespace torusdyn
