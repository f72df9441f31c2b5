#include <cmath>
#include <cstdint>

#include <absl/container/flat_hash_map.h>
#include <boost/random/poisson_distribution.hpp>

#include "latwalk/cone_palm.hpp"
#include "latwalk/error.hpp"
#include "numeric.hpp"

namespace latwalk {

std::vector<Point2> poisson_points(double intensity, const Box& window, SeededSource src) {
  if (!(intensity > 0.0) || std::isinf(intensity)) throw InvalidArgument("intensity must be positive and finite");
  if (!(window.x1 >= window.x0 && window.y1 >= window.y0)) throw InvalidArgument("window corners are reversed");
  const double mean = intensity * window.area();
  if (mean == 0.0) return {};
  if (std::isinf(mean)) throw InvalidArgument("window must be bounded");
  Rng rng(src);
  boost::random::poisson_distribution<std::uint64_t, double> count_dist(mean);
  const auto count = count_dist(rng);
  std::vector<Point2> pts(count);
  const double w = window.x1 - window.x0;
  const double h = window.y1 - window.y0;
  for (auto& p : pts) {
    p.x = window.x0 + w * rng.uniform();
    p.y = window.y0 + h * rng.uniform();
  }
  return pts;
}

std::vector<std::size_t> neighbor_counts(std::span<const Point2> points, const Box& window, double r) {
  if (!(r > 0.0) || std::isinf(r)) throw InvalidArgument("radius must be positive and finite");
  if (!(window.x1 > window.x0 && window.y1 > window.y0)) throw InvalidArgument("window must be non-empty");

  auto cell_of = [r](double v) { return static_cast<std::int64_t>(std::floor(v / r)); };
  auto cell_key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffu);
  };
  absl::flat_hash_map<std::uint64_t, std::vector<std::size_t>> grid;
  grid.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    grid[cell_key(cell_of(points[i].x), cell_of(points[i].y))].push_back(i);
  }

  const double r2 = r * r;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.x - window.x0 > r && window.x1 - p.x > r && p.y - window.y0 > r && window.y1 - p.y > r)) continue;
    const auto cx = cell_of(p.x);
    const auto cy = cell_of(p.y);
    std::size_t k = 0;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find(cell_key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (auto jdx : it->second) {
          if (jdx == i) continue;
          const double ex = points[jdx].x - p.x;
          const double ey = points[jdx].y - p.y;
          if (ex * ex + ey * ey < r2) ++k;
        }
      }
    }
    counts.push_back(k);
  }
  return counts;
}

PalmEstimate palm_empty_ball(std::span<const Point2> points, const Box& window, double r) {
  const auto counts = neighbor_counts(points, window, r);
  if (counts.empty()) throw DegenerateInput("no points inside the minus-sampled window");
  std::size_t empty = 0;
  for (auto k : counts) empty += k == 0;
  PalmEstimate est;
  est.centers = counts.size();
  est.fraction = static_cast<double>(empty) / static_cast<double>(est.centers);
  est.se = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(est.centers));
  return est;
}

PalmMarkEstimate palm_marked_points(std::span<const Point2> points, const Box& window, double r, double beta,
                                    std::size_t s1, std::size_t s2) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  const auto counts = neighbor_counts(points, window, r);
  if (counts.empty()) throw DegenerateInput("no points inside the minus-sampled window");
  detail::CompensatedSum sum;
  detail::CompensatedSum sum2;
  for (auto k : counts) {
    if (k < s1 || k > s2) continue;
    const double w = std::exp(-beta * static_cast<double>(k));
    sum.add(w);
    sum2.add(w * w);
  }
  PalmMarkEstimate est;
  est.centers = counts.size();
  const double c = static_cast<double>(est.centers);
  est.sum = sum.value();
  est.average = est.sum / c;
  const double var = std::max(0.0, sum2.value() / c - est.average * est.average);
  est.se = std::sqrt(var / c);
  return est;
}

}  // namespace latwalk
