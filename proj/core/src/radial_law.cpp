#include "latwalk/radial_law.hpp"

#include <algorithm>
#include <cmath>

#include "latwalk/ensemble.hpp"
#include "latwalk/error.hpp"
#include "numeric.hpp"

namespace latwalk {

RadialLaw RadialLaw::from_atoms(double n, std::span<const std::pair<double, double>> atoms) {
  RadialLaw law;
  law.n = n;
  for (const auto& [x, mass] : atoms) {
    law.bins.push_back({x, x, x, mass});
    law.members.emplace_back();
    law.mean_chi += x * mass;
    law.mean_chi2 += x * x * mass;
    law.total_weight += mass;
  }
  if (law.total_weight > 0.0) {
    law.mean_chi /= law.total_weight;
    law.mean_chi2 /= law.total_weight;
  }
  return law;
}

std::optional<std::size_t> RadialLaw::bin_of(double x) const {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& b = bins[i];
    const bool last = i + 1 == bins.size();
    if (b.lo == b.hi ? x == b.lo : (x >= b.lo && (x < b.hi || (last && x == b.hi)))) return i;
  }
  return std::nullopt;
}

double RadialLaw::total_mass() const {
  detail::CompensatedSum sum;
  for (const auto& b : bins) sum.add(b.mass);
  return sum.value();
}

RadialLaw distance_law(const WeightedEnsemble& ens, BinSpec spec) {
  if (!(spec.width > 0.0)) throw InvalidArgument("bin width must be positive");
  if (ens.size() == 0 || !(ens.total_weight() > 0.0)) throw DegenerateInput("ensemble has no weight");

  RadialLaw law;
  law.n = static_cast<double>(ens.config().n);
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(law.n / spec.width)));
  std::vector<detail::CompensatedSum> bin_weight(count);
  law.members.assign(count, {});
  for (std::size_t k = 0; k < count; ++k) {
    const double lo = static_cast<double>(k) * spec.width;
    const double hi = std::min(law.n, lo + spec.width);
    law.bins.push_back({lo, hi, 0.5 * (lo + hi), 0.0});
  }

  detail::CompensatedSum total;
  detail::CompensatedSum chi;
  detail::CompensatedSum chi2;
  const auto& records = ens.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto k = static_cast<std::size_t>(r.chi / spec.width);
    k = std::min(k, count - 1);
    bin_weight[k].add(r.weight);
    law.members[k].push_back(i);
    total.add(r.weight);
    chi.add(r.weight * r.chi);
    chi2.add(r.weight * r.chi * r.chi);
  }
  law.total_weight = total.value();
  for (std::size_t k = 0; k < count; ++k) law.bins[k].mass = bin_weight[k].value() / law.total_weight;
  law.mean_chi = chi.value() / law.total_weight;
  law.mean_chi2 = chi2.value() / law.total_weight;
  return law;
}

}  // namespace latwalk
