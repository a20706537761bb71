#pragma once

#include <cstdint>

namespace sosgibbs {

// SplitMix64. Small, fixed output across platforms and standard libraries,
// which the seeded sample streams and golden values rely on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Seed of the independent stream number `stream` derived from a base seed.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  SplitMix64 mix(base ^ (0xD1B54A32D192ED03ull * (stream + 1)));
  mix.next();
  return mix.next();
}

}  // namespace sosgibbs
