#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace tsalign::rng {

// Deterministic PRNG used everywhere randomness is needed. std::random
// distributions are implementation-defined, so outputs would not be
// reproducible across toolchains; these routines are bit-stable.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// splitmix64 finalizer.
inline std::uint64_t mix(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// FNV-1a over a label string; used to give each consumer of a global seed
/// its own independent stream family.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Stream id for (seed, label, index). Same inputs, same stream, on every
/// platform and regardless of the order streams are created in.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t label_hash,
                            std::uint64_t index) {
  return mix(mix(seed ^ label_hash) + index * kGolden);
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view label,
                            std::uint64_t index) {
  return derive(seed, fnv1a(label), index);
}

/// Counter-based splitmix64 generator with uniform/Gaussian helpers.
class Stream {
 public:
  explicit Stream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via Box-Muller; generates pairs and caches the second.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// In-place Fisher-Yates shuffle driven by `stream`.
template <typename Vec>
void shuffle(Vec& v, Stream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(stream.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace tsalign::rng
