#pragma once

#include <cmath>
#include <cstdint>

namespace repbasis {

// All randomness in the library flows through the generator below so that a
// given (n, p, seed) triple produces the same subset on every platform and in
// every release.  Standard-library distributions are deliberately avoided:
// their output is implementation-defined.

// splitmix64 finalizer; also used to mix seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Seed-derivation convention used by the experiment harness:
//   derive_seed(master, stream, index) = mix64(mix64(master ^ mix64(stream)) ^ mix64(index))
// Streams keep trial seeds, window-point sampling and scan points independent
// of one another and of execution order.
enum : std::uint64_t {
  kStreamTrial = 1,
  kStreamJSample = 2,
  kStreamScanPoint = 3,
  kStreamInstance = 4,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  return mix64(mix64(master ^ mix64(stream)) ^ mix64(index));
}

// xoshiro256++ (Blackman & Vigna, public domain reference implementation),
// seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound) without modulo bias (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Bernoulli(p) as a fixed 64-bit threshold test: include iff next_u64() < floor(p * 2^64).
// For p in [0,1) the product is exactly representable below 2^64, so the cast is safe.
inline std::uint64_t bernoulli_threshold(double p) {
  if (p >= 1.0) return ~0ull;
  if (p <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

}  // namespace repbasis
