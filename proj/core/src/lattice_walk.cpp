#include "latwalk/lattice_walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latwalk/error.hpp"
#include "site_tally.hpp"

namespace latwalk {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > kMaxDimension) {
    throw InvalidArgument("dimension must lie in [1, " + std::to_string(kMaxDimension) + "], got " +
                          std::to_string(d));
  }
}

bool two_bit(int dim) { return dim == 2; }

std::size_t packed_size(int dim, std::size_t length) {
  return two_bit(dim) ? (length + 3) / 4 : length;
}

std::vector<std::uint8_t> pack_steps(int dim, std::span<const Direction> steps) {
  std::vector<std::uint8_t> out(packed_size(dim, steps.size()), 0);
  if (two_bit(dim)) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      out[i / 4] |= static_cast<std::uint8_t>(steps[i] << (2 * (i % 4)));
    }
  } else {
    std::copy(steps.begin(), steps.end(), out.begin());
  }
  return out;
}

}  // namespace

std::size_t max_steps(int d) {
  check_dimension(d);
  if (d == 1) return kDefaultStepCap;
  const unsigned bits = 64u / static_cast<unsigned>(d);
  const std::size_t key_limit = (std::size_t{1} << (bits - 1)) - 1;
  return std::min(key_limit, kDefaultStepCap);
}

// --- LatticeSite -------------------------------------------------------------

LatticeSite::LatticeSite(int dim) : dim_(dim) { check_dimension(dim); }

LatticeSite::LatticeSite(std::initializer_list<std::int32_t> coords)
    : LatticeSite(std::span<const std::int32_t>(coords.begin(), coords.size())) {}

LatticeSite::LatticeSite(std::span<const std::int32_t> coords) : dim_(static_cast<int>(coords.size())) {
  check_dimension(dim_);
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

std::int64_t LatticeSite::norm2() const {
  std::int64_t sum = 0;
  for (int i = 0; i < dim_; ++i) sum += std::int64_t{coords_[i]} * coords_[i];
  return sum;
}

double LatticeSite::norm() const { return std::sqrt(static_cast<double>(norm2())); }

// --- SiteTrace ---------------------------------------------------------------

SiteTrace::SiteTrace(int dim, std::vector<std::int32_t> flat) : dim_(dim), flat_(std::move(flat)) {
  check_dimension(dim);
  if (flat_.empty() || flat_.size() % static_cast<std::size_t>(dim) != 0) {
    throw InvalidArgument("site trace must hold a positive whole number of sites");
  }
}

// --- LatticePath -------------------------------------------------------------

LatticePath::LatticePath(int dim) : dim_(dim) { check_dimension(dim); }

LatticePath::LatticePath(int dim, std::size_t length, std::vector<std::uint8_t> packed)
    : dim_(dim), length_(length), packed_(std::move(packed)) {}

LatticePath LatticePath::from_steps(int dim, std::span<const Direction> steps) {
  check_dimension(dim);
  for (Direction s : steps) {
    if (s >= 2 * dim) throw InvalidArgument("step direction out of range for dimension");
  }
  return LatticePath(dim, steps.size(), pack_steps(dim, steps));
}

LatticePath LatticePath::from_packed(int dim, std::size_t length, std::vector<std::uint8_t> packed) {
  check_dimension(dim);
  if (packed.size() != packed_size(dim, length)) {
    throw InvalidArgument("packed step buffer has the wrong size");
  }
  if (two_bit(dim)) {
    // Unused high bits of the final byte must be clear so equality is well defined.
    if (length % 4 != 0 && (packed.back() >> (2 * (length % 4))) != 0) {
      throw InvalidArgument("packed step buffer has stray trailing bits");
    }
  } else {
    for (std::uint8_t s : packed) {
      if (s >= 2 * dim) throw InvalidArgument("step direction out of range for dimension");
    }
  }
  return LatticePath(dim, length, std::move(packed));
}

LatticePath LatticePath::from_sites(const SiteTrace& trace) {
  const int d = trace.dimension();
  for (int a = 0; a < d; ++a) {
    if (trace[0][a] != 0) throw InvalidArgument("path must start at the origin");
  }
  std::vector<Direction> steps;
  steps.reserve(trace.steps());
  for (std::size_t k = 1; k < trace.size(); ++k) {
    auto prev = trace[k - 1];
    auto cur = trace[k];
    int axis = -1;
    int delta = 0;
    for (int a = 0; a < d; ++a) {
      const std::int64_t diff = std::int64_t{cur[a]} - prev[a];
      if (diff == 0) continue;
      if (axis >= 0 || (diff != 1 && diff != -1)) {
        throw InvalidArgument("consecutive sites are not nearest neighbours at index " + std::to_string(k));
      }
      axis = a;
      delta = static_cast<int>(diff);
    }
    if (axis < 0) throw InvalidArgument("repeated site without a step at index " + std::to_string(k));
    steps.push_back(make_direction(axis, delta < 0));
  }
  return from_steps(d, steps);
}

Direction LatticePath::step(std::size_t i) const {
  if (two_bit(dim_)) return static_cast<Direction>((packed_[i / 4] >> (2 * (i % 4))) & 3u);
  return packed_[i];
}

std::vector<Direction> LatticePath::steps() const {
  std::vector<Direction> out(length_);
  for (std::size_t i = 0; i < length_; ++i) out[i] = step(i);
  return out;
}

SiteTrace LatticePath::sites() const {
  std::vector<std::int32_t> flat((length_ + 1) * dim_, 0);
  for (std::size_t i = 0; i < length_; ++i) {
    const Direction s = step(i);
    std::int32_t* next = flat.data() + (i + 1) * dim_;
    std::copy_n(flat.data() + i * dim_, dim_, next);
    next[direction_axis(s)] += direction_sign(s);
  }
  return SiteTrace(dim_, std::move(flat));
}

LatticeSite LatticePath::endpoint() const {
  LatticeSite end(dim_);
  for (std::size_t i = 0; i < length_; ++i) {
    const Direction s = step(i);
    end[direction_axis(s)] += direction_sign(s);
  }
  return end;
}

// --- operations --------------------------------------------------------------

LatticePath sample_srw(std::size_t n, int d, Rng& rng, std::size_t step_cap) {
  check_dimension(d);
  if (n > std::min(step_cap, max_steps(d))) {
    throw InvalidArgument("walk length " + std::to_string(n) + " exceeds the step cap");
  }
  std::vector<Direction> steps(n);
  const auto choices = static_cast<std::uint32_t>(2 * d);
  for (auto& s : steps) s = static_cast<Direction>(rng.below(choices));
  return LatticePath::from_steps(d, steps);
}

LatticePath sample_srw(std::size_t n, int d, SeededSource src, std::size_t step_cap) {
  Rng rng(src);
  return sample_srw(n, d, rng, step_cap);
}

std::uint64_t silt_count(const SiteTrace& trace) {
  detail::SiteTally tally;
  tally.reserve(trace.size());
  std::uint64_t j = 0;
  // Each new visit to a site already seen m times closes m new coincident pairs,
  // so the running total is sum over sites of m(m-1)/2.
  for (std::size_t k = 0; k < trace.size(); ++k) j += tally.add(trace[k]);
  return j;
}

std::uint64_t silt_count(const LatticePath& path) { return silt_count(path.sites()); }

double endpoint_distance(const LatticePath& path) { return path.endpoint().norm(); }

double hull_radius(const SiteTrace& trace) {
  std::int64_t best = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    std::int64_t r2 = 0;
    for (std::int32_t c : trace[k]) r2 += std::int64_t{c} * c;
    best = std::max(best, r2);
  }
  return std::sqrt(static_cast<double>(best));
}

double hull_radius(const LatticePath& path) { return hull_radius(path.sites()); }

LatticePath insert_repetitions(const LatticePath& path, std::span<const std::size_t> positions) {
  const std::size_t n = path.length();
  if (positions.empty()) return path;
  if (n < 2) throw InvalidArgument("path too short for interior repetitions");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t j = positions[i];
    if (j < 1 || j > n - 1) {
      throw InvalidArgument("repetition position " + std::to_string(j) + " is not an interior step index");
    }
    if (i > 0 && j < positions[i - 1] + 2) {
      throw InvalidArgument("repetition positions must be increasing and at least 2 apart");
    }
  }

  const auto base = path.steps();
  std::vector<Direction> out;
  out.reserve(n + 2 * positions.size());
  std::size_t next = 0;
  for (std::size_t step_index = 1; step_index <= n && out.size() < n; ++step_index) {
    const Direction s = base[step_index - 1];
    out.push_back(s);
    if (next < positions.size() && positions[next] == step_index) {
      // S_j -> S_{j-1} -> S_j, then carry on with the original steps.
      out.push_back(reverse(s));
      out.push_back(s);
      ++next;
    }
  }
  out.resize(n);
  return LatticePath::from_steps(path.dimension(), out);
}

}  // namespace latwalk
