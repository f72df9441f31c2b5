#include "latwalk/census.hpp"

#include <cmath>
#include <string>

#include "latwalk/error.hpp"
#include "latwalk/lattice_walk.hpp"
#include "parallel.hpp"

namespace latwalk {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDimension) throw InvalidArgument("dimension out of range");
}

/// Dense (2n+1)^d box addressed by linear index, used as the DFS scratch space.
struct Box {
  Box(std::size_t n, int d) : dim(d), radius(static_cast<std::int64_t>(n)) {
    const std::int64_t side = 2 * radius + 1;
    std::int64_t stride = 1;
    origin = 0;
    for (int a = 0; a < d; ++a) {
      delta.push_back(stride);
      delta.push_back(-stride);
      origin += radius * stride;
      stride *= side;
    }
    cells = static_cast<std::size_t>(stride);
    if (cells > kMaxCells) {
      throw ResourceLimit("enumeration box of " + std::to_string(cells) + " sites is too large");
    }
  }

  static constexpr std::size_t kMaxCells = std::size_t{1} << 27;

  int dim;
  std::int64_t radius;
  std::int64_t origin = 0;
  std::size_t cells = 0;
  std::vector<std::int64_t> delta;  // per Direction
};

// --- self-avoiding walks -----------------------------------------------------

struct SawPrefix {
  std::vector<Direction> steps;
  bool straight = true;
};

class SawCounter {
 public:
  SawCounter(std::size_t n_max, int d, bool symmetric)
      : box_(n_max, d), n_max_(n_max), symmetric_(symmetric), occupied_(box_.cells, 0),
        counts_(n_max + 1, 0) {
    // Under symmetry reduction the first step is fixed to +axis0. In d = 2 the
    // first turn is additionally fixed to +y, so a bent walk stands for 8 and
    // the straight rod for 4.
    straight_weight_ = symmetric ? 2u * static_cast<unsigned>(d) : 1u;
    turned_weight_ = symmetric && d == 2 ? 8u : straight_weight_;
  }

  /// Enumerates prefixes of exactly `depth` steps, counting all shorter walks.
  std::vector<SawPrefix> prefixes(std::size_t depth) {
    std::vector<SawPrefix> out;
    SawPrefix current;
    cut_ = depth;
    prefix_sink_ = &out;
    occupied_[box_.origin] = 1;
    if (!symmetric_) {
      if (depth == 0) {
        out.push_back(current);
      } else {
        ++counts_[0];
        for (Direction dir = 0; dir < 2 * box_.dim; ++dir) {
          current.steps = {dir};
          current.straight = true;
          step_into(box_.origin, dir, 1, current);
        }
      }
    } else {
      ++counts_[0];
      current.steps = {kEast};
      step_into(box_.origin, kEast, 1, current);
    }
    occupied_[box_.origin] = 0;
    prefix_sink_ = nullptr;
    return out;
  }

  /// Counts every extension (beyond the prefix itself) of a prefix.
  void extend(const SawPrefix& prefix) {
    cut_ = static_cast<std::size_t>(-1);
    std::vector<std::int64_t> path{box_.origin};
    for (Direction dir : prefix.steps) path.push_back(path.back() + box_.delta[dir]);
    for (auto idx : path) occupied_[idx] = 1;
    descend(path.back(), prefix.steps.size(), prefix.straight, prefix.steps.front(), false);
    for (auto idx : path) occupied_[idx] = 0;
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  void step_into(std::int64_t from, Direction dir, std::size_t depth, SawPrefix& current) {
    const std::int64_t to = from + box_.delta[dir];
    if (occupied_[to]) return;
    occupied_[to] = 1;
    if (depth == cut_) {
      prefix_sink_->push_back(current);
    } else {
      counts_[depth] += current.straight ? straight_weight_ : turned_weight_;
      if (depth < n_max_) {
        for (Direction next = 0; next < 2 * box_.dim; ++next) {
          if (!allowed(current.straight, next)) continue;
          const bool was_straight = current.straight;
          current.steps.push_back(next);
          current.straight = was_straight && next == current.steps.front();
          step_into(to, next, depth + 1, current);
          current.steps.pop_back();
          current.straight = was_straight;
        }
      }
    }
    occupied_[to] = 0;
  }

  bool allowed(bool straight, Direction next) const {
    // While still straight along +x, only continue or make the canonical first turn.
    if (symmetric_ && box_.dim == 2 && straight) return next == kEast || next == kNorth;
    return true;
  }

  void descend(std::int64_t at, std::size_t depth, bool straight, Direction first, bool count_here) {
    if (count_here) counts_[depth] += straight ? straight_weight_ : turned_weight_;
    if (depth == n_max_) return;
    for (Direction next = 0; next < 2 * box_.dim; ++next) {
      if (!allowed(straight, next)) continue;
      const std::int64_t to = at + box_.delta[next];
      if (occupied_[to]) continue;
      occupied_[to] = 1;
      descend(to, depth + 1, straight && next == first, first, true);
      occupied_[to] = 0;
    }
  }

  Box box_;
  std::size_t n_max_;
  bool symmetric_;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint64_t> counts_;
  unsigned straight_weight_ = 1;
  unsigned turned_weight_ = 1;
  std::size_t cut_ = 0;
  std::vector<SawPrefix>* prefix_sink_ = nullptr;
};

// --- all walks ---------------------------------------------------------------

class WalkCounter {
 public:
  WalkCounter(std::size_t n, int d)
      : box_(n, d), n_(n), visits_(box_.cells, 0), coords_(d, 0),
        j_stride_(static_cast<std::size_t>(n) * n + 1),
        cells_((n * (n + 1) / 2 + 1) * j_stride_, 0) {}

  void run(const std::vector<Direction>& prefix, std::uint64_t weight) {
    std::int64_t at = box_.origin;
    std::uint64_t j = 0;
    std::vector<std::int64_t> path{at};
    visits_[at] = 1;
    for (Direction dir : prefix) {
      at += box_.delta[dir];
      coords_[direction_axis(dir)] += direction_sign(dir);
      j += visits_[at]++;
      path.push_back(at);
    }
    weight_ = weight;
    descend(at, prefix.size(), j);
    for (auto idx : path) visits_[idx] = 0;
    std::fill(coords_.begin(), coords_.end(), 0);
  }

  void merge_into(std::map<std::pair<std::uint64_t, std::int64_t>, std::uint64_t>& out) const {
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      if (cells_[k] == 0) continue;
      out[{k / j_stride_, static_cast<std::int64_t>(k % j_stride_)}] += cells_[k];
    }
  }

 private:
  void descend(std::int64_t at, std::size_t depth, std::uint64_t j) {
    if (depth == n_) {
      std::int64_t r2 = 0;
      for (auto c : coords_) r2 += c * c;
      cells_[j * j_stride_ + static_cast<std::size_t>(r2)] += weight_;
      return;
    }
    for (Direction dir = 0; dir < 2 * box_.dim; ++dir) {
      const std::int64_t to = at + box_.delta[dir];
      const std::uint64_t seen = visits_[to]++;
      coords_[direction_axis(dir)] += direction_sign(dir);
      descend(to, depth + 1, j + seen);
      coords_[direction_axis(dir)] -= direction_sign(dir);
      --visits_[to];
    }
  }

  Box box_;
  std::size_t n_;
  std::vector<std::uint8_t> visits_;
  std::vector<std::int64_t> coords_;
  std::size_t j_stride_;
  std::vector<std::uint64_t> cells_;
  std::uint64_t weight_ = 1;
};

BigCount ipow(std::uint64_t base, std::size_t exp) {
  BigCount r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t default_saw_budget(int d) {
  check_dim(d);
  if (d == 1) return 64;
  // Largest n with the trivial upper bound 2d (2d-1)^(n-1) no bigger than d = 2's at n = 14.
  const double limit = 4.0 * std::pow(3.0, 13);
  std::size_t n = 1;
  while (2.0 * d * std::pow(2.0 * d - 1.0, static_cast<double>(n)) <= limit) ++n;
  return n;
}

std::size_t default_walk_budget(int d) {
  check_dim(d);
  const double limit = std::pow(4.0, 13);
  std::size_t n = 0;
  while (std::pow(2.0 * d, static_cast<double>(n + 1)) <= limit) ++n;
  return n;
}

SawCountTable enumerate_saw(std::size_t n_max, int d, const CensusOptions& options) {
  check_dim(d);
  if (n_max < 1) throw InvalidArgument("census needs n_max >= 1");
  const std::size_t budget = options.budget ? options.budget : default_saw_budget(d);
  if (n_max > budget) {
    throw ResourceLimit("SAW census n_max " + std::to_string(n_max) + " exceeds budget " +
                        std::to_string(budget));
  }

  // Split at a shallow depth so prefixes can be farmed out; merge is a sum in task order.
  const std::size_t split = std::min<std::size_t>(n_max, 4);
  SawCounter root(n_max, d, options.use_symmetry);
  const auto prefixes = root.prefixes(split);
  std::vector<std::vector<std::uint64_t>> partial(prefixes.size());
  detail::parallel_for(prefixes.size(), options.threads, [&](std::size_t i) {
    SawCounter worker(n_max, d, options.use_symmetry);
    worker.extend(prefixes[i]);
    partial[i] = worker.counts();
  });

  std::vector<std::uint64_t> totals = root.counts();
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < totals.size(); ++k) totals[k] += p[k];
  }
  // Prefixes themselves were not counted by either pass: add them at depth `split`.
  const unsigned straight_weight = options.use_symmetry ? 2u * static_cast<unsigned>(d) : 1u;
  const unsigned turned_weight = options.use_symmetry && d == 2 ? 8u : straight_weight;
  for (const auto& p : prefixes) totals[split] += p.straight ? straight_weight : turned_weight;

  SawCountTable table;
  table.dimension = d;
  for (std::size_t k = 1; k <= n_max; ++k) table.counts[k] = totals[k];
  return table;
}

WalkCensus enumerate_walks(std::size_t n, int d, const CensusOptions& options) {
  check_dim(d);
  const std::size_t budget = options.budget ? options.budget : default_walk_budget(d);
  if (n > budget) {
    throw ResourceLimit("full walk enumeration n " + std::to_string(n) + " exceeds budget " +
                        std::to_string(budget));
  }
  WalkCensus census;
  census.n = n;
  census.dimension = d;
  if (n == 0) {
    census.cells[{0, 0}] = 1;
    return census;
  }
  // J and |S_n|^2 are invariant under lattice symmetries: fix the first step.
  // Tasks are the (2d) two-step prefixes starting with +axis0 (or the single step when n = 1).
  std::vector<std::vector<Direction>> tasks;
  if (n == 1) {
    tasks.push_back({0});
  } else {
    for (Direction second = 0; second < 2 * d; ++second) tasks.push_back({0, second});
  }
  std::vector<std::map<std::pair<std::uint64_t, std::int64_t>, std::uint64_t>> partial(tasks.size());
  detail::parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    WalkCounter counter(n, d);
    counter.run(tasks[i], 2u * static_cast<unsigned>(d));
    counter.merge_into(partial[i]);
  });
  for (const auto& p : partial) {
    for (const auto& [key, count] : p) census.cells[key] += count;
  }
  return census;
}

// --- SiltHistogram -----------------------------------------------------------

SiltHistogram::SiltHistogram(std::size_t n, int d, std::map<std::uint64_t, BigCount> cells)
    : n_(n), d_(d), cells_(std::move(cells)), total_(0) {
  for (const auto& [j, c] : cells_) total_ += c;
}

BigCount SiltHistogram::count(std::uint64_t j) const {
  auto it = cells_.find(j);
  return it == cells_.end() ? BigCount(0) : it->second;
}

double SiltHistogram::probability_eq(std::uint64_t j) const {
  return static_cast<double>(count(j).convert_to<long double>() / total_.convert_to<long double>());
}

double SiltHistogram::probability_le(double t) const {
  BigCount acc = 0;
  for (const auto& [j, c] : cells_) {
    if (static_cast<double>(j) <= t) acc += c;
  }
  return static_cast<double>(acc.convert_to<long double>() / total_.convert_to<long double>());
}

double SiltHistogram::probability_gt(double t) const {
  BigCount acc = 0;
  for (const auto& [j, c] : cells_) {
    if (static_cast<double>(j) > t) acc += c;
  }
  return static_cast<double>(acc.convert_to<long double>() / total_.convert_to<long double>());
}

SiltHistogram silt_histogram(const WalkCensus& census) {
  std::map<std::uint64_t, BigCount> cells;
  for (const auto& [key, count] : census.cells) cells[key.first] += count;
  SiltHistogram hist(census.n, census.dimension, std::move(cells));
  if (hist.total() != ipow(2u * static_cast<unsigned>(census.dimension), census.n)) {
    throw std::logic_error("walk census lost mass");
  }
  return hist;
}

SiltHistogram silt_histogram(std::size_t n, int d, const CensusOptions& options) {
  return silt_histogram(enumerate_walks(n, d, options));
}

// --- derived quantities ------------------------------------------------------

ConnectiveEstimate connective_estimate(const SawCountTable& table) {
  if (table.counts.empty()) throw InvalidArgument("empty SAW table");
  ConnectiveEstimate est;
  for (const auto& [n, c] : table.counts) {
    const long double root = std::pow(c.convert_to<long double>(), 1.0L / static_cast<long double>(n));
    est.roots.emplace_back(n, static_cast<double>(root));
  }
  est.mu = est.roots.back().second;
  est.nu0 = std::log(est.mu);
  return est;
}

bool within_connective_band(const SawCountTable& table, std::size_t n) {
  const auto& c = table.at(n);
  const BigCount d = table.dimension;
  const BigCount lower = boost::multiprecision::pow(d, static_cast<unsigned>(n));
  const BigCount upper = 2 * d * boost::multiprecision::pow(2 * d - 1, static_cast<unsigned>(n - 1));
  return lower <= c && c <= upper;
}

std::vector<std::pair<std::size_t, std::size_t>> submultiplicativity_violations(const SawCountTable& table) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (const auto& [n, cn] : table.counts) {
    for (const auto& [m, cm] : table.counts) {
      if (m < n) continue;
      const auto it = table.counts.find(n + m);
      if (it != table.counts.end() && it->second > cn * cm) bad.emplace_back(n, m);
    }
  }
  return bad;
}

double threshold_bstar(double beta, double nu0, int d) {
  check_dim(d);
  const double log_coordination = std::log(2.0 * d);
  if (!(beta > 0.0)) throw InvalidArgument("threshold_bstar needs beta > 0");
  if (!(nu0 > 0.0) || nu0 >= log_coordination) {
    throw InvalidArgument("threshold_bstar needs 0 < nu0 < ln(2d)");
  }
  return (log_coordination - nu0) / beta;
}

Prop21Report verify_prop21(const SiltHistogram& hist, double beta, double B, double nu0) {
  Prop21Report rep;
  rep.n = hist.length();
  rep.beta = beta;
  rep.B = B;
  rep.bstar = threshold_bstar(beta, nu0, hist.dimension());
  rep.precondition_met = B > rep.bstar;

  const long double total = hist.total().convert_to<long double>();
  const long double bound = static_cast<long double>(B) * static_cast<long double>(rep.n);
  long double lhs = 0.0L;
  for (const auto& [j, c] : hist.cells()) {
    if (static_cast<long double>(j) > bound) {
      lhs += c.convert_to<long double>() * std::exp(-static_cast<long double>(beta) * j);
    }
  }
  rep.lhs = static_cast<double>(lhs / total);
  rep.rhs = static_cast<double>(hist.count(0).convert_to<long double>() / total);
  rep.holds = rep.lhs < rep.rhs;
  return rep;
}

Prop21Report verify_prop21(std::size_t n, int d, double beta, double B, double nu0,
                           const CensusOptions& options) {
  return verify_prop21(silt_histogram(n, d, options), beta, B, nu0);
}

}  // namespace latwalk
