#pragma once

#include <cstdint>

#include "coreflow/rational.hpp"

namespace coreflow {

// Fixed PRNG so that generated corpora are reproducible across platforms and
// implementations: xoshiro256** seeded through splitmix64. The seed is
// recorded in generated instance files and solver reports.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      // splitmix64 step
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // True with probability exactly p (p in [0,1]), using a 64-bit draw:
  // draw/2^64 < p, evaluated in exact integer arithmetic.
  bool chance(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const BigInt draw(next());
    return draw * denominator(p) < numerator(p) * (BigInt(1) << 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

// Decorrelated stream for worker/trial `index` under a base seed.
inline Xoshiro256 stream_for(std::uint64_t seed, std::uint64_t index) {
  return Xoshiro256(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace coreflow
