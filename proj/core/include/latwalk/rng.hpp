#pragma once

#include <cstdint>
#include <random>

namespace latwalk {

/// Identifies one reproducible random stream. Workers get disjoint streams.
struct SeededSource {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;

  friend bool operator==(const SeededSource&, const SeededSource&) = default;
};

/// 64-bit Mersenne twister keyed by (seed, stream).
///
/// The helpers below avoid std::uniform_*_distribution so that a given
/// (seed, stream) produces the same draws under every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(SeededSource src);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint32_t below(std::uint32_t bound) {
    // Multiply-shift: bias is bound / 2^64, far below anything measurable.
    __extension__ using Wide = unsigned __int128;
    const auto wide = static_cast<Wide>(engine_()) * bound;
    return static_cast<std::uint32_t>(wide >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace latwalk
