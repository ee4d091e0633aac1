#pragma once

#include <cstdint>

namespace qgate {

/// Counter-free splitmix64 generator. The output sequence is fully pinned by
/// the implementation (no library distributions involved), so campaigns are
/// reproducible bit-for-bit from a seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed for (seed, stream); used to give every
/// optimization start its own generator regardless of execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng h(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  h.next_u64();
  return h.next_u64();
}

}  // namespace qgate
