#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace latwalk {

/// One cell of a radial law. `x` is the representative point used in Stieltjes sums.
struct RadialBin {
  double lo = 0.0;
  double hi = 0.0;
  double x = 0.0;
  double mass = 0.0;
};

/// Weighted empirical distribution of the endpoint distance chi_n on [0, n].
struct RadialLaw {
  double n = 0.0;
  std::vector<RadialBin> bins;
  /// Indices of the ensemble records falling in each bin.
  std::vector<std::vector<std::size_t>> members;
  double mean_chi = 0.0;
  double mean_chi2 = 0.0;
  double total_weight = 0.0;

  /// Law with one degenerate bin [x, x] per atom (x, mass). Masses are used as given.
  static RadialLaw from_atoms(double n, std::span<const std::pair<double, double>> atoms);

  std::optional<std::size_t> bin_of(double x) const;
  double total_mass() const;
};

/// Equal-width bins [k w, (k+1) w) covering [0, n]; the last bin is closed at n.
struct BinSpec {
  double width = 1.0;
};

}  // namespace latwalk
