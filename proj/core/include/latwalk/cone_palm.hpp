#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "latwalk/asymptotics.hpp"
#include "latwalk/ensemble.hpp"
#include "latwalk/lattice_walk.hpp"
#include "latwalk/rng.hpp"

namespace latwalk {

/// Self-intersection sites, each with multiplicity m(m-1)/2 for m visits.
struct IntersectionProcess {
  int dimension = 2;
  std::size_t n = 0;
  std::map<LatticeSite, std::uint64_t> atoms;
  std::uint64_t total = 0;
};

IntersectionProcess extract_process(const LatticePath& path);
IntersectionProcess extract_process(const SiteTrace& trace);

/// m half-lines from the origin at angles 2 pi k / m.
struct TestLineSet {
  std::vector<double> angles;

  std::size_t size() const { return angles.size(); }
  static TestLineSet equally_spaced(std::size_t m);
  /// m = ceil(v sqrt(n)).
  static TestLineSet for_length(std::size_t n, double v = 1.0);
};

/// Euclidean distance from (x, y) to the half-line at `angle`.
double ray_distance(double x, double y, double angle);

/// Per-line cone masses, held exactly as integers over a common denominator.
struct ConeDecomposition {
  std::size_t n = 0;
  std::uint64_t j = 0;
  std::vector<double> angles;
  std::uint64_t denominator = 1;
  std::vector<std::uint64_t> units;

  std::size_t size() const { return units.size(); }
  double mass(std::size_t line) const {
    return static_cast<double>(units[line]) / static_cast<double>(denominator);
  }
  std::vector<double> masses() const;
  /// Sum of units equals j * denominator.
  bool conserves_mass() const;
};

/// Planar processes only. Ties split the atom's mass equally among the tied lines.
ConeDecomposition cone_decompose(const IntersectionProcess& proc, const TestLineSet& lines);

struct LineClassification {
  double n = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double delta = 0.0;
  std::vector<std::size_t> half;
  std::vector<std::size_t> half_pm;
  std::vector<std::size_t> minus;
  std::vector<std::size_t> plus;
  std::vector<std::size_t> empty;
  /// L_r for each queried r.
  std::map<double, std::vector<std::size_t>> by_r;
};

/// Interval ends are compared with relative tolerance 1e-12; intervals are closed.
LineClassification classify_lines(const ConeDecomposition& dec, double a1, double a2, double delta,
                                  std::span<const double> r_queries = {});

/// Lines with 2|C_L| in [a1 n^r, a2 n^r].
std::vector<std::size_t> lines_in_class(const ConeDecomposition& dec, double a1, double a2, double r);

struct ShapeBand {
  double r = 0.0;
  double sum = 0.0;
  std::size_t lines = 0;
};

struct ShapeReport {
  double rho = 0.0;
  double delta = 0.0;
  double grid_step = 0.0;
  double threshold = 0.0;
  /// Every band of the grid, in increasing r.
  std::vector<ShapeBand> bands;
  /// Bands whose sum reaches the threshold.
  std::vector<ShapeBand> detected;
  bool circular = false;
};

/// Bands [r, r + delta] for r = 0, step, 2 step, ... up to 1; a band holds lines
/// with 2|C_L| in [a1 n^r, a2 n^{r+delta}] and qualifies when its mass reaches
/// J^{1-rho} / 2. grid_step <= 0 means delta, or 0.05 when delta is 0.
ShapeReport detect_shapes(const ConeDecomposition& dec, double a1, double a2, double delta, double rho,
                          double grid_step = 0.0);

/// a_x per bin of `law` from per-record decompositions (parallel to the ensemble records).
AxTable estimate_ax(const RadialLaw& law, std::span<const ConeDecomposition> decs,
                    std::span<const double> weights, double a1, double a2, double beta, double r);

/// Decomposes every retained path of `ens` on `lines` first.
AxTable estimate_ax(const WeightedEnsemble& ens, const RadialLaw& law, const TestLineSet& lines, double a1,
                    double a2, double beta, double r, unsigned threads = 1);

/// Sum over `subset` of exp(-beta |C_L|).
double palm_marked_lines(const IntersectionProcess& proc, const TestLineSet& lines,
                         std::span<const std::size_t> subset, double beta);

// --- planar point processes ---------------------------------------------------

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double area() const { return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0); }
  bool contains(const Point2& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

/// Homogeneous Poisson sample in `window`.
std::vector<Point2> poisson_points(double intensity, const Box& window, SeededSource src);

struct PalmEstimate {
  double fraction = 0.0;
  /// Binomial standard error sqrt(p (1 - p) / centers).
  double se = 0.0;
  std::size_t centers = 0;
};

/// Fraction of centers with no other point at distance < r. Centers are the
/// points of `window` farther than r from its boundary (minus-sampling); points
/// outside the window still count as neighbors.
PalmEstimate palm_empty_ball(std::span<const Point2> points, const Box& window, double r);

struct PalmMarkEstimate {
  double sum = 0.0;
  /// sum / centers
  double average = 0.0;
  double se = 0.0;
  std::size_t centers = 0;
};

/// Sum over centers z with neighbor count k(z) in [s1, s2] of exp(-beta k(z)).
PalmMarkEstimate palm_marked_points(std::span<const Point2> points, const Box& window, double r, double beta,
                                    std::size_t s1, std::size_t s2);

/// Neighbor counts (other points at distance < r) of the minus-sampled centers.
std::vector<std::size_t> neighbor_counts(std::span<const Point2> points, const Box& window, double r);

}  // namespace latwalk
