#pragma once

#include <cstdint>

namespace btsel {

// Minimal PCG32 (O'Neill). Platform-independent output for a given seed,
// which the fallback draws and the test generators depend on.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0x853c49e6748fea9bULL)
      : state_(0), inc_((stream << 1u) | 1u) {
    next();
    state_ += seed;
    next();
  }

  std::uint32_t next() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // Unbiased draw in [0, n). n must be nonzero.
  std::uint32_t bounded(std::uint32_t n) {
    std::uint32_t threshold = (0u - n) % n;
    for (;;) {
      std::uint32_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  std::uint64_t next64() {
    std::uint64_t hi = next();
    return (hi << 32) | next();
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next()) * (1.0 / 4294967296.0); }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace btsel
