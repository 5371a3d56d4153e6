#pragma once

#include <cstdint>

namespace drama {

// SplitMix64. Chosen over <random> distributions because their output is
// implementation-defined; this stream is bit-identical on every platform,
// which the reproducibility contract requires.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi] inclusive. Modulo bias is irrelevant at the range
  // sizes used here; determinism is what matters.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Derives independent per-episode seeds from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  Rng r(base ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return r.next_u64();
}

}  // namespace drama
