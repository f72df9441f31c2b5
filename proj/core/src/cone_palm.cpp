#include "latwalk/cone_palm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "latwalk/error.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "site_tally.hpp"

namespace latwalk {

namespace {

constexpr double kRelTol = 1e-12;

bool at_least(double v, double bound) { return v >= bound * (1.0 - kRelTol); }
bool at_most(double v, double bound) { return v <= bound * (1.0 + kRelTol); }
bool within(double v, double lo, double hi) { return at_least(v, lo) && at_most(v, hi); }

}  // namespace

IntersectionProcess extract_process(const SiteTrace& trace) {
  IntersectionProcess proc;
  proc.dimension = trace.dimension();
  proc.n = trace.steps();
  detail::SiteTally tally;
  for (std::size_t k = 0; k <= trace.steps(); ++k) {
    const auto before = tally.add(trace[k]);
    if (before == 0) continue;
    // The m-th visit adds m - 1 new coincident pairs.
    auto& mult = proc.atoms[trace.site(k)];
    mult += before;
    proc.total += before;
  }
  return proc;
}

IntersectionProcess extract_process(const LatticePath& path) { return extract_process(path.sites()); }

TestLineSet TestLineSet::equally_spaced(std::size_t m) {
  if (m == 0) throw InvalidArgument("test line set needs at least one line");
  TestLineSet set;
  set.angles.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    set.angles[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
  }
  return set;
}

TestLineSet TestLineSet::for_length(std::size_t n, double v) {
  if (!(v > 0.0)) throw InvalidArgument("line density v must be positive");
  const auto m = static_cast<std::size_t>(std::ceil(v * std::sqrt(static_cast<double>(n))));
  return equally_spaced(std::max<std::size_t>(m, 1));
}

double ray_distance(double x, double y, double angle) {
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  const double t = x * ux + y * uy;
  if (t < 0.0) return std::hypot(x, y);
  return std::abs(x * uy - y * ux);
}

std::vector<double> ConeDecomposition::masses() const {
  std::vector<double> out(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) out[i] = mass(i);
  return out;
}

bool ConeDecomposition::conserves_mass() const {
  std::uint64_t sum = 0;
  for (auto u : units) sum += u;
  return sum == j * denominator;
}

ConeDecomposition cone_decompose(const IntersectionProcess& proc, const TestLineSet& lines) {
  if (lines.size() == 0) throw InvalidArgument("empty test line set");
  if (proc.dimension != 2 && !proc.atoms.empty()) throw InvalidArgument("cone decomposition is planar");
  const std::size_t m = lines.size();

  struct Assignment {
    std::uint64_t mass;
    std::vector<std::size_t> lines;
  };
  std::vector<Assignment> assigned;
  assigned.reserve(proc.atoms.size());
  std::uint64_t denominator = 1;

  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double spacing = 2.0 * std::numbers::pi / static_cast<double>(m);

  for (const auto& [site, mult] : proc.atoms) {
    const double x = site[0];
    const double y = site[1];
    Assignment a{mult, {}};
    if (x == 0.0 && y == 0.0) {
      a.lines = all;
    } else {
      // The nearest rays bracket the atom's angle; a few neighbors guard rounding.
      std::vector<std::size_t> candidates;
      if (m <= 6) {
        candidates = all;
      } else {
        double theta = std::atan2(y, x);
        if (theta < 0.0) theta += 2.0 * std::numbers::pi;
        const auto k0 = static_cast<std::int64_t>(std::floor(theta / spacing));
        for (std::int64_t k = k0 - 1; k <= k0 + 2; ++k) {
          candidates.push_back(static_cast<std::size_t>(((k % static_cast<std::int64_t>(m)) + m) % m));
        }
      }
      const double tol = 1e-9 * std::max(1.0, std::hypot(x, y));
      double best = std::numeric_limits<double>::infinity();
      for (auto k : candidates) best = std::min(best, ray_distance(x, y, lines.angles[k]));
      for (auto k : candidates) {
        if (ray_distance(x, y, lines.angles[k]) <= best + tol &&
            std::find(a.lines.begin(), a.lines.end(), k) == a.lines.end()) {
          a.lines.push_back(k);
        }
      }
    }
    denominator = std::lcm(denominator, static_cast<std::uint64_t>(a.lines.size()));
    assigned.push_back(std::move(a));
  }

  ConeDecomposition dec;
  dec.n = proc.n;
  dec.j = proc.total;
  dec.angles = lines.angles;
  dec.denominator = denominator;
  dec.units.assign(m, 0);
  for (const auto& a : assigned) {
    const std::uint64_t share = a.mass * (denominator / a.lines.size());
    for (auto k : a.lines) dec.units[k] += share;
  }
  return dec;
}

std::vector<std::size_t> lines_in_class(const ConeDecomposition& dec, double a1, double a2, double r) {
  const double n = static_cast<double>(dec.n);
  const double lo = a1 * std::pow(n, r);
  const double hi = a2 * std::pow(n, r);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    if (dec.units[k] != 0 && within(2.0 * dec.mass(k), lo, hi)) out.push_back(k);
  }
  return out;
}

LineClassification classify_lines(const ConeDecomposition& dec, double a1, double a2, double delta,
                                  std::span<const double> r_queries) {
  if (!(a1 > 0.0 && a1 < a2)) throw InvalidArgument("classification needs 0 < a1 < a2");
  if (!(delta >= 0.0 && delta < 0.5)) throw InvalidArgument("classification needs 0 <= delta < 1/2");
  LineClassification c;
  c.n = static_cast<double>(dec.n);
  c.a1 = a1;
  c.a2 = a2;
  c.delta = delta;
  const double lo = a1 * std::pow(c.n, 0.5 - delta);
  const double hi = a2 * std::pow(c.n, 0.5 + delta);
  for (std::size_t k = 0; k < dec.size(); ++k) {
    const double twice = 2.0 * dec.mass(k);
    if (dec.units[k] == 0) {
      c.empty.push_back(k);
    } else if (!at_least(twice, lo)) {
      c.minus.push_back(k);
    } else if (!at_most(twice, hi)) {
      c.plus.push_back(k);
    } else {
      c.half_pm.push_back(k);
    }
  }
  c.half = lines_in_class(dec, a1, a2, 0.5);
  for (double r : r_queries) c.by_r[r] = lines_in_class(dec, a1, a2, r);
  return c;
}

ShapeReport detect_shapes(const ConeDecomposition& dec, double a1, double a2, double delta, double rho,
                          double grid_step) {
  if (dec.j == 0) throw DegenerateInput("shape detection needs J_n > 0");
  if (!(a1 > 0.0 && a1 < a2)) throw InvalidArgument("shape detection needs 0 < a1 < a2");
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  ShapeReport rep;
  rep.rho = rho;
  rep.delta = delta;
  rep.grid_step = grid_step > 0.0 ? grid_step : (delta > 0.0 ? delta : 0.05);
  rep.threshold = 0.5 * std::pow(static_cast<double>(dec.j), 1.0 - rho);

  std::vector<double> grid;
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / rep.grid_step + 1e-9));
  for (std::size_t k = 0; k <= steps; ++k) grid.push_back(static_cast<double>(k) * rep.grid_step);
  if (grid.back() < 1.0 - 1e-12) grid.push_back(1.0);

  const double n = static_cast<double>(dec.n);
  for (double r : grid) {
    const double lo = a1 * std::pow(n, r);
    const double hi = a2 * std::pow(n, r + delta);
    ShapeBand band{r, 0.0, 0};
    detail::CompensatedSum sum;
    for (std::size_t k = 0; k < dec.size(); ++k) {
      if (dec.units[k] != 0 && within(2.0 * dec.mass(k), lo, hi)) {
        sum.add(dec.mass(k));
        ++band.lines;
      }
    }
    band.sum = sum.value();
    rep.bands.push_back(band);
    if (band.sum >= rep.threshold) {
      rep.detected.push_back(band);
      if (r - 1e-12 <= 0.5 && 0.5 <= r + delta + 1e-12) rep.circular = true;
    }
  }
  return rep;
}

AxTable estimate_ax(const RadialLaw& law, std::span<const ConeDecomposition> decs, std::span<const double> weights,
                    double a1, double a2, double beta, double r) {
  if (!(beta > 0.0) || std::isinf(beta)) throw InvalidArgument("a_x needs a finite beta > 0");
  if (!(a1 > 0.0 && a1 < a2)) throw InvalidArgument("a_x needs 0 < a1 < a2");
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("class exponent r must lie in [0, 1]");
  if (decs.size() != weights.size()) throw InvalidArgument("decompositions and weights differ in length");

  AxTable table;
  table.n = law.n;
  table.beta = beta;
  table.r = r;
  table.a1 = a1;
  table.a2 = a2;
  for (std::size_t b = 0; b < law.bins.size(); ++b) {
    const auto& bin = law.bins[b];
    AxEntry e;
    e.lo = bin.lo;
    e.hi = bin.hi;
    e.x = bin.x;
    const auto& members = b < law.members.size() ? law.members[b] : std::vector<std::size_t>{};
    e.missing = members.empty();
    detail::CompensatedSum num;
    detail::CompensatedSum den;
    for (auto i : members) {
      if (i >= decs.size()) throw InvalidArgument("law member index outside the decomposition list");
      const auto cls = lines_in_class(decs[i], a1, a2, r);
      if (cls.empty()) {
        ++e.empty_class;
        continue;
      }
      detail::CompensatedSum inner;
      for (auto k : cls) inner.add(std::exp(-beta * decs[i].mass(k)));
      num.add(weights[i] * inner.value() / static_cast<double>(cls.size()));
      den.add(weights[i]);
      ++e.samples;
    }
    if (e.samples > 0 && den.value() > 0.0) {
      e.average = num.value() / den.value();
      if (e.average > 0.0) {
        e.ax = invert_ax(e.average, beta, law.n, r);
        e.defined = true;
      }
    }
    table.entries.push_back(e);
  }
  return table;
}

AxTable estimate_ax(const WeightedEnsemble& ens, const RadialLaw& law, const TestLineSet& lines, double a1, double a2,
                    double beta, double r, unsigned threads) {
  if (ens.paths().size() != ens.size()) throw InvalidArgument("a_x estimation needs retained paths");
  std::vector<ConeDecomposition> decs(ens.size());
  detail::parallel_for(ens.size(), threads,
                       [&](std::size_t i) { decs[i] = cone_decompose(extract_process(ens.paths()[i]), lines); });
  std::vector<double> weights(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i) weights[i] = ens.records()[i].weight;
  return estimate_ax(law, decs, weights, a1, a2, beta, r);
}

double palm_marked_lines(const IntersectionProcess& proc, const TestLineSet& lines,
                         std::span<const std::size_t> subset, double beta) {
  const auto dec = cone_decompose(proc, lines);
  detail::CompensatedSum sum;
  for (auto k : subset) {
    if (k >= dec.size()) throw InvalidArgument("line index out of range");
    sum.add(std::exp(-beta * dec.mass(k)));
  }
  return sum.value();
}

}  // namespace latwalk
