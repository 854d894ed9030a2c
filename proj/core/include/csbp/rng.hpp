#pragma once

#include <cstdint>
#include <limits>

namespace csbp {

/// SplitMix64 finalizer; a bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of seeds and indices into a new seed.
constexpr std::uint64_t hash_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ mix64(b + 0x9e3779b97f4a7c15ULL));
}

constexpr std::uint64_t hash_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return hash_seed(hash_seed(a, b), c);
}

/// Counter-based SplitMix64 stream.
///
/// Output i of a stream with key k is mix64(k + i * golden). Streams are
/// split by hashing a stream id into the key, so a child stream never depends
/// on how many values the parent has produced. Satisfies
/// UniformRandomBitGenerator and can drive the <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Independent child stream, a pure function of (this key, stream id).
  SplitMix64 split(std::uint64_t stream) const noexcept {
    return SplitMix64(hash_seed(key_, stream));
  }

  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(SplitMix64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace csbp
