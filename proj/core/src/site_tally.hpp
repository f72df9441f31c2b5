#pragma once

#include <cstdint>
#include <algorithm>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace latwalk::detail {

/// Packs a site into a fixed-width 64-bit key: 64/d bits per coordinate,
/// offset-binary. Callers keep |coord| below 2^(64/d - 1) (see max_steps).
inline std::uint64_t site_key(std::span<const std::int32_t> coords) {
  const auto d = static_cast<unsigned>(coords.size());
  if (d == 1) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(coords[0])) ^ (std::uint64_t{1} << 63);
  }
  const unsigned bits = 64 / d;
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  const std::int64_t offset = std::int64_t{1} << (bits - 1);
  std::uint64_t key = 0;
  for (unsigned i = 0; i < d; ++i) {
    key |= (static_cast<std::uint64_t>(coords[i] + offset) & mask) << (i * bits);
  }
  return key;
}

/// Visit counts per site.
class SiteTally {
 public:
  void reserve(std::size_t n) { counts_.reserve(n); }
  void clear() { counts_.clear(); }

  /// Records one more visit; returns the count before the visit.
  std::uint32_t add(std::span<const std::int32_t> site) { return counts_[site_key(site)]++; }

  std::uint32_t count(std::span<const std::int32_t> site) const {
    auto it = counts_.find(site_key(site));
    return it == counts_.end() ? 0 : it->second;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, count] : counts_) fn(key, count);
  }

 private:
  absl::flat_hash_map<std::uint64_t, std::uint32_t> counts_;
};

}  // namespace latwalk::detail

namespace latwalk::detail {

/// Open-addressing visit counter that clears in O(1) by bumping a generation
/// stamp. Sized once for at most `max_entries` distinct sites.
class StampedTally {
 public:
  explicit StampedTally(std::size_t max_entries) {
    std::size_t cap = 16;
    unsigned bits = 4;
    while (cap < 2 * max_entries) {
      cap <<= 1;
      ++bits;
    }
    shift_ = 64 - bits;
    mask_ = cap - 1;
    keys_.assign(cap, 0);
    counts_.assign(cap, 0);
    stamps_.assign(cap, 0);
  }

  void clear() {
    if (++generation_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0u);
      generation_ = 1;
    }
  }

  std::uint32_t add(std::uint64_t key) {
    for (std::size_t slot = home(key);; slot = (slot + 1) & mask_) {
      if (stamps_[slot] != generation_) {
        stamps_[slot] = generation_;
        keys_[slot] = key;
        counts_[slot] = 1;
        return 0;
      }
      if (keys_[slot] == key) return counts_[slot]++;
    }
  }

  std::uint32_t count(std::uint64_t key) const {
    for (std::size_t slot = home(key);; slot = (slot + 1) & mask_) {
      if (stamps_[slot] != generation_) return 0;
      if (keys_[slot] == key) return counts_[slot];
    }
  }

 private:
  std::size_t home(std::uint64_t key) const {
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
  }

  unsigned shift_ = 60;
  std::size_t mask_ = 15;
  std::uint32_t generation_ = 1;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> stamps_;
};

}  // namespace latwalk::detail
