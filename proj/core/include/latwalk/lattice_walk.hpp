#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "latwalk/rng.hpp"

namespace latwalk {

inline constexpr int kMaxDimension = 8;

/// Default hard cap on walk length accepted by samplers.
inline constexpr std::size_t kDefaultStepCap = std::size_t{1} << 24;

/// Longest walk whose sites fit the fixed-width site key in dimension d.
std::size_t max_steps(int d);

/// A point of Z^d, d <= kMaxDimension.
class LatticeSite {
 public:
  LatticeSite() = default;
  explicit LatticeSite(int dim);
  LatticeSite(std::initializer_list<std::int32_t> coords);
  explicit LatticeSite(std::span<const std::int32_t> coords);

  int dimension() const { return dim_; }
  std::int32_t operator[](int axis) const { return coords_[axis]; }
  std::int32_t& operator[](int axis) { return coords_[axis]; }
  std::span<const std::int32_t> coords() const { return {coords_.data(), static_cast<std::size_t>(dim_)}; }

  std::int64_t norm2() const;
  double norm() const;

  friend auto operator<=>(const LatticeSite&, const LatticeSite&) = default;
  friend bool operator==(const LatticeSite&, const LatticeSite&) = default;

 private:
  int dim_ = 0;
  std::array<std::int32_t, kMaxDimension> coords_{};
};

/// Unit step index in [0, 2d): axis = dir / 2, negative when dir is odd.
using Direction = std::uint8_t;

inline constexpr Direction kEast = 0;
inline constexpr Direction kWest = 1;
inline constexpr Direction kNorth = 2;
inline constexpr Direction kSouth = 3;

constexpr Direction make_direction(int axis, bool negative) {
  return static_cast<Direction>(2 * axis + (negative ? 1 : 0));
}
constexpr int direction_axis(Direction dir) { return dir >> 1; }
constexpr int direction_sign(Direction dir) { return (dir & 1) ? -1 : 1; }
constexpr Direction reverse(Direction dir) { return static_cast<Direction>(dir ^ 1); }

/// Expanded site sequence S_0..S_n stored as a flat coordinate array.
class SiteTrace {
 public:
  SiteTrace(int dim, std::vector<std::int32_t> flat);

  int dimension() const { return dim_; }
  std::size_t size() const { return flat_.size() / static_cast<std::size_t>(dim_); }
  std::size_t steps() const { return size() - 1; }

  std::span<const std::int32_t> operator[](std::size_t k) const {
    return {flat_.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }
  LatticeSite site(std::size_t k) const { return LatticeSite((*this)[k]); }
  std::span<const std::int32_t> flat() const { return flat_; }

 private:
  int dim_;
  std::vector<std::int32_t> flat_;
};

/// Nearest-neighbour walk from the origin, stored as packed step directions
/// (2 bits per step in d = 2, one byte per step otherwise). Immutable.
class LatticePath {
 public:
  explicit LatticePath(int dim);

  static LatticePath from_steps(int dim, std::span<const Direction> steps);
  /// Throws InvalidArgument unless S_0 is the origin and every step is a unit move.
  static LatticePath from_sites(const SiteTrace& trace);
  /// Adopts an already packed step buffer (see packed()).
  static LatticePath from_packed(int dim, std::size_t length, std::vector<std::uint8_t> packed);

  int dimension() const { return dim_; }
  std::size_t length() const { return length_; }
  Direction step(std::size_t i) const;
  std::vector<Direction> steps() const;
  SiteTrace sites() const;
  LatticeSite endpoint() const;

  const std::vector<std::uint8_t>& packed() const { return packed_; }

  friend bool operator==(const LatticePath&, const LatticePath&) = default;

 private:
  LatticePath(int dim, std::size_t length, std::vector<std::uint8_t> packed);

  int dim_;
  std::size_t length_ = 0;
  std::vector<std::uint8_t> packed_;
};

/// Simple random walk of n steps, each uniform over the 2d unit directions.
LatticePath sample_srw(std::size_t n, int d, Rng& rng, std::size_t step_cap = kDefaultStepCap);
LatticePath sample_srw(std::size_t n, int d, SeededSource src, std::size_t step_cap = kDefaultStepCap);

/// Self-intersection local time J_n = #{i < j : S_i = S_j}, via site occupancy.
std::uint64_t silt_count(const LatticePath& path);
std::uint64_t silt_count(const SiteTrace& trace);

/// |S_n|.
double endpoint_distance(const LatticePath& path);

/// max_k |S_k|, the walk's radius measured from its start.
double hull_radius(const LatticePath& path);
double hull_radius(const SiteTrace& trace);

/// Inserts an immediate backtrack-and-return after each listed step index and
/// truncates back to the original length. Positions must be distinct, in
/// [1, n-1], and pairwise at least 2 apart.
LatticePath insert_repetitions(const LatticePath& path, std::span<const std::size_t> positions);

}  // namespace latwalk
