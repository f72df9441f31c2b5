#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "latwalk/ensemble.hpp"
#include "latwalk/lattice_walk.hpp"
#include "latwalk/rng.hpp"

namespace latwalk {

struct ChainSettings {
  std::size_t n = 0;
  int d = 2;
  double beta = 1.0;
  std::optional<Window> window;
  double pivot_fraction = 0.8;
  std::size_t init_attempts = 10000;
};

struct ChainCounters {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t pivot_proposals = 0;
  std::uint64_t pivot_accepted = 0;
  std::uint64_t local_proposals = 0;
  std::uint64_t local_accepted = 0;
  std::uint64_t window_rejections = 0;
};

/// Metropolis chain on fixed-length walks with stationary law proportional to
/// exp(-beta J_n), optionally restricted to J_n in [b1 n, b2 n].
///
/// Pivot proposals pick a site k uniformly from 0..n-1 and a non-identity
/// signed permutation of the axes, and apply it to S_{k+1..n} about S_k. Local
/// proposals either swap two consecutive steps or redraw the final step. Both
/// are symmetric, so acceptance is min(1, exp(-beta dJ)). With beta infinite
/// the chain never leaves the self-avoiding walks.
class PivotChain {
 public:
  /// Throws InitializationError when no starting walk satisfies the window.
  PivotChain(const ChainSettings& settings, Rng rng);
  ~PivotChain();
  PivotChain(PivotChain&&) noexcept;
  PivotChain& operator=(PivotChain&&) noexcept;

  /// Performs one proposal; returns whether it was accepted.
  bool step();

  std::uint64_t silt() const;
  double endpoint_distance() const;
  double endpoint_norm2() const;
  double radius() const;
  SiteTrace trace() const;
  LatticePath path() const;
  const ChainCounters& counters() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace latwalk
