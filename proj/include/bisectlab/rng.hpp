#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

// Deterministic randomness utilities. Everything seeded (instance generation,
// power-iteration start vectors, per-trial seeds) goes through this header so
// that the same seed reproduces the same bits on any platform: mt19937_64 is
// fully specified by the standard, and we never touch the unspecified
// std::*_distribution classes.

namespace bisectlab {

// SplitMix64 finalizer. Used as the avalanche step when deriving child seeds.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(master ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

inline constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a,
                                        std::uint64_t b) noexcept {
  return mix_seed(mix_seed(master, a), b);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1), 53 random bits
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in {0, ..., bound-1}; modulo bias is ~bound/2^64, irrelevant here
  std::uint64_t next_below(std::uint64_t bound) { return eng_() % bound; }

  // Skip sampling: number of consecutive misses before the next hit of an
  // event with probability p, where log_one_minus_p = log1p(-p). Passing
  // -inf (p = 1) yields 0; passing -0.0 (p = 0) yields the no-hit sentinel.
  static constexpr std::uint64_t no_hit = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t next_gap(double log_one_minus_p) {
    double u = 1.0 - next_unit();  // (0, 1]
    double g = std::floor(std::log(u) / log_one_minus_p);
    if (!(g < 9.0e18)) return no_hit;
    return static_cast<std::uint64_t>(g);
  }

  // Fisher-Yates; unlike std::shuffle the visitation order is pinned down
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bisectlab
