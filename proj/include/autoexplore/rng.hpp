#pragma once

#include <cstdint>

namespace autoexplore {

// Counter-based pseudo-random generator: the SplitMix64 sequence
// (Steele, Lea & Flood 2014). Output i is a fixed avalanche of
// seed + (i+1)*golden_gamma, so streams can be split/derived by key
// without shared state, and replay is bit-exact on every platform.
// This generator is part of the reproducibility contract: all sampled
// trajectories depend only on (base_seed, run_index).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Per-run seed derivation: two mixing rounds over (base_seed, run_index).
// Fixed forever; documented in the README.
inline std::uint64_t derive_run_seed(std::uint64_t base_seed,
                                     std::uint64_t run_index) {
  std::uint64_t h = SplitMix64::mix(base_seed + SplitMix64::kGamma);
  h = SplitMix64::mix(h ^ (run_index + 1) * SplitMix64::kGamma);
  return h;
}

}  // namespace autoexplore
