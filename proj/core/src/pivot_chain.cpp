#include "latwalk/pivot_chain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "latwalk/error.hpp"
#include "site_tally.hpp"

namespace latwalk {

namespace {

/// x -> sign[i] * x[perm[i]] per output axis i.
struct SignedPermutation {
  std::array<int, kMaxDimension> perm{};
  std::array<int, kMaxDimension> sign{};
};

}  // namespace

struct PivotChain::Impl {
  Impl(const ChainSettings& s, Rng r)
      : n(s.n), d(s.d), beta(s.beta), pivot_fraction(s.pivot_fraction), rng(std::move(r)),
        sites((s.n + 1) * static_cast<std::size_t>(s.d), 0), proposal((s.n + 1) * static_cast<std::size_t>(s.d)),
        tally(s.n + 1) {
    if (s.window) {
      lo = std::ceil(s.window->b1 * static_cast<double>(n));
      hi = std::floor(s.window->b2 * static_cast<double>(n));
      windowed = true;
    }
    initialise(s.init_attempts);
  }

  // --- state ---
  std::size_t n;
  int d;
  double beta;
  double pivot_fraction;
  Rng rng;
  std::vector<std::int32_t> sites;
  std::vector<std::int32_t> proposal;
  detail::StampedTally tally;
  std::uint64_t j = 0;
  bool windowed = false;
  double lo = 0.0;
  double hi = 0.0;
  ChainCounters counters;

  bool self_avoiding() const { return std::isinf(beta); }

  std::span<const std::int32_t> site(std::size_t k) const {
    return {sites.data() + k * d, static_cast<std::size_t>(d)};
  }

  bool in_window(double value) const { return !windowed || (value >= lo && value <= hi); }

  void load(const LatticePath& path) {
    const auto trace = path.sites();
    std::copy(trace.flat().begin(), trace.flat().end(), sites.begin());
    j = silt_count(trace);
  }

  void initialise(std::size_t attempts) {
    std::vector<Direction> rod(n, kEast);
    if (!windowed) {
      load(LatticePath::from_steps(d, rod));
      return;
    }
    if (self_avoiding() || lo > hi) {
      throw InitializationError("window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] admits no walk under this penalty");
    }
    // A straight rod with k immediate backtracks has J_n = 2k exactly.
    const auto k = static_cast<std::size_t>(std::ceil(std::max(lo, 0.0) / 2.0));
    if (k > 0 && 4 * k <= n + 1 && static_cast<double>(2 * k) <= hi) {
      std::vector<std::size_t> positions;
      for (std::size_t i = 0; i < k; ++i) positions.push_back(2 * i + 1);
      load(insert_repetitions(LatticePath::from_steps(d, rod), positions));
      if (in_window(static_cast<double>(j))) return;
    }
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
      load(sample_srw(n, d, rng));
      if (in_window(static_cast<double>(j))) return;
    }
    throw InitializationError("no walk with J_n in the window after " + std::to_string(attempts) + " attempts");
  }

  SignedPermutation random_symmetry() {
    SignedPermutation g;
    for (;;) {
      bool identity = true;
      for (int i = 0; i < d; ++i) g.perm[i] = i;
      for (int i = d - 1; i > 0; --i) {
        std::swap(g.perm[i], g.perm[rng.below(static_cast<std::uint32_t>(i + 1))]);
      }
      for (int i = 0; i < d; ++i) {
        g.sign[i] = rng.below(2) ? -1 : 1;
        identity = identity && g.perm[i] == i && g.sign[i] == 1;
      }
      if (!identity) return g;
    }
  }

  bool accept(std::int64_t delta) {
    const double proposed = static_cast<double>(j) + static_cast<double>(delta);
    if (!in_window(proposed)) {
      ++counters.window_rejections;
      return false;
    }
    if (delta <= 0) return true;
    if (self_avoiding()) return false;
    return rng.uniform() < std::exp(-beta * static_cast<double>(delta));
  }

  bool pivot() {
    ++counters.pivot_proposals;
    const std::size_t k = rng.below(static_cast<std::uint32_t>(n));
    const auto g = random_symmetry();
    const std::int32_t* origin = sites.data() + k * d;

    for (std::size_t i = k + 1; i <= n; ++i) {
      const std::int32_t* src = sites.data() + i * d;
      std::int32_t* dst = proposal.data() + i * d;
      for (int a = 0; a < d; ++a) dst[a] = origin[a] + g.sign[a] * (src[g.perm[a]] - origin[g.perm[a]]);
    }

    // Only prefix/suffix coincidences change: the suffix moves rigidly.
    tally.clear();
    for (std::size_t i = 0; i <= k; ++i) tally.add(detail::site_key(site(i)));

    std::int64_t delta = 0;
    if (self_avoiding()) {
      for (std::size_t i = k + 1; i <= n; ++i) {
        if (tally.count(detail::site_key({proposal.data() + i * d, static_cast<std::size_t>(d)}))) {
          return false;
        }
      }
    } else {
      for (std::size_t i = k + 1; i <= n; ++i) {
        delta += tally.count(detail::site_key({proposal.data() + i * d, static_cast<std::size_t>(d)}));
        delta -= tally.count(detail::site_key(site(i)));
      }
    }
    if (!accept(delta)) return false;
    std::copy(proposal.begin() + static_cast<std::ptrdiff_t>((k + 1) * d), proposal.end(),
              sites.begin() + static_cast<std::ptrdiff_t>((k + 1) * d));
    j = static_cast<std::uint64_t>(static_cast<std::int64_t>(j) + delta);
    ++counters.pivot_accepted;
    return true;
  }

  bool local() {
    ++counters.local_proposals;
    const std::size_t i = rng.below(static_cast<std::uint32_t>(n)) + 1;
    std::array<std::int32_t, kMaxDimension> moved{};
    const std::int32_t* prev = sites.data() + (i - 1) * d;
    const std::int32_t* cur = sites.data() + i * d;
    if (i < n) {
      // Swap steps i and i+1: only S_i moves.
      const std::int32_t* next = sites.data() + (i + 1) * d;
      for (int a = 0; a < d; ++a) moved[a] = prev[a] + (next[a] - cur[a]);
    } else {
      for (int a = 0; a < d; ++a) moved[a] = prev[a];
      const Direction dir = static_cast<Direction>(rng.below(static_cast<std::uint32_t>(2 * d)));
      moved[direction_axis(dir)] += direction_sign(dir);
    }
    if (std::equal(moved.begin(), moved.begin() + d, cur)) {
      ++counters.local_accepted;
      return true;
    }

    std::int64_t at_new = 0;
    std::int64_t at_old = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      const std::int32_t* s = sites.data() + k * d;
      if (std::equal(moved.begin(), moved.begin() + d, s)) {
        if (self_avoiding()) return false;
        ++at_new;
      } else if (k != i && std::equal(cur, cur + d, s)) {
        ++at_old;
      }
    }
    const std::int64_t delta = at_new - at_old;
    if (!accept(delta)) return false;
    std::copy(moved.begin(), moved.begin() + d, sites.begin() + static_cast<std::ptrdiff_t>(i * d));
    j = static_cast<std::uint64_t>(static_cast<std::int64_t>(j) + delta);
    ++counters.local_accepted;
    return true;
  }

  bool step() {
    ++counters.proposals;
    const bool ok = rng.uniform() < pivot_fraction ? pivot() : local();
    if (ok) ++counters.accepted;
    return ok;
  }
};

PivotChain::PivotChain(const ChainSettings& settings, Rng rng) {
  if (settings.n < 2) throw InvalidArgument("pivot chain needs n >= 2");
  if (settings.d < 1 || settings.d > kMaxDimension) throw InvalidArgument("dimension out of range");
  if (settings.n > max_steps(settings.d)) throw InvalidArgument("walk too long for this dimension");
  if (!(settings.beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  if (settings.pivot_fraction < 0.0 || settings.pivot_fraction > 1.0) {
    throw InvalidArgument("pivot fraction must lie in [0, 1]");
  }
  impl_ = std::make_unique<Impl>(settings, std::move(rng));
}

PivotChain::~PivotChain() = default;
PivotChain::PivotChain(PivotChain&&) noexcept = default;
PivotChain& PivotChain::operator=(PivotChain&&) noexcept = default;

bool PivotChain::step() { return impl_->step(); }

std::uint64_t PivotChain::silt() const { return impl_->j; }

double PivotChain::endpoint_norm2() const {
  double r2 = 0.0;
  for (std::int32_t c : impl_->site(impl_->n)) r2 += static_cast<double>(c) * c;
  return r2;
}

double PivotChain::endpoint_distance() const { return std::sqrt(endpoint_norm2()); }

double PivotChain::radius() const {
  std::int64_t best = 0;
  for (std::size_t k = 0; k <= impl_->n; ++k) {
    std::int64_t r2 = 0;
    for (std::int32_t c : impl_->site(k)) r2 += std::int64_t{c} * c;
    best = std::max(best, r2);
  }
  return std::sqrt(static_cast<double>(best));
}

SiteTrace PivotChain::trace() const { return SiteTrace(impl_->d, impl_->sites); }

LatticePath PivotChain::path() const { return LatticePath::from_sites(trace()); }

const ChainCounters& PivotChain::counters() const { return impl_->counters; }

}  // namespace latwalk
