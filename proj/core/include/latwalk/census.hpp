#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace latwalk {

using BigCount = boost::multiprecision::cpp_int;

struct CensusOptions {
  /// Largest admissible n; 0 selects the per-dimension default budget.
  std::size_t budget = 0;
  unsigned threads = 1;
  /// Exploit lattice symmetries (first step fixed; in d = 2 also the first turn).
  bool use_symmetry = true;
};

/// Default SAW census budget: 14 steps in d = 2, comparable work elsewhere.
std::size_t default_saw_budget(int d);
/// Default full-walk budget: largest n with (2d)^n <= 4^13.
std::size_t default_walk_budget(int d);

/// c_n = number of n-step self-avoiding walks, for n = 1..n_max.
struct SawCountTable {
  int dimension = 2;
  std::map<std::size_t, BigCount> counts;

  const BigCount& at(std::size_t n) const { return counts.at(n); }
  std::size_t max_length() const { return counts.empty() ? 0 : counts.rbegin()->first; }
};

/// Depth-first enumeration with visited-set backtracking.
/// Throws ResourceLimit when n_max exceeds the budget.
SawCountTable enumerate_saw(std::size_t n_max, int d, const CensusOptions& options = {});

/// Exact joint counts of (J_n, |S_n|^2) over all (2d)^n walks.
struct WalkCensus {
  std::size_t n = 0;
  int dimension = 2;
  /// (J, |S_n|^2) -> number of walks.
  std::map<std::pair<std::uint64_t, std::int64_t>, std::uint64_t> cells;
};

WalkCensus enumerate_walks(std::size_t n, int d, const CensusOptions& options = {});

/// Exact law of J_n under the uniform measure on all walks of length n.
class SiltHistogram {
 public:
  SiltHistogram(std::size_t n, int d, std::map<std::uint64_t, BigCount> cells);

  std::size_t length() const { return n_; }
  int dimension() const { return d_; }
  const std::map<std::uint64_t, BigCount>& cells() const { return cells_; }
  /// (2d)^n.
  const BigCount& total() const { return total_; }
  BigCount count(std::uint64_t j) const;

  double probability_eq(std::uint64_t j) const;
  double probability_le(double t) const;
  double probability_gt(double t) const;

 private:
  std::size_t n_;
  int d_;
  std::map<std::uint64_t, BigCount> cells_;
  BigCount total_;
};

SiltHistogram silt_histogram(std::size_t n, int d, const CensusOptions& options = {});
SiltHistogram silt_histogram(const WalkCensus& census);

struct ConnectiveEstimate {
  /// (n, c_n^{1/n}) for every n in the table.
  std::vector<std::pair<std::size_t, double>> roots;
  /// Working estimate of the connective constant: the root at the largest n.
  double mu = 0.0;
  double nu0 = 0.0;
};

ConnectiveEstimate connective_estimate(const SawCountTable& table);

/// d^n <= c_n <= 2d (2d-1)^{n-1}, checked in exact arithmetic. In d = 2 this is
/// 2 <= c_n^{1/n} <= 3 (4/3)^{1/n}.
bool within_connective_band(const SawCountTable& table, std::size_t n);

/// Pairs (n, m) with n + m in the table and c_{n+m} > c_n c_m.
std::vector<std::pair<std::size_t, std::size_t>> submultiplicativity_violations(const SawCountTable& table);

/// B_* = (ln(2d) - nu0) / beta. Requires beta > 0 and 0 < nu0 < ln(2d).
double threshold_bstar(double beta, double nu0, int d = 2);

struct Prop21Report {
  std::size_t n = 0;
  double beta = 0.0;
  double B = 0.0;
  double bstar = 0.0;
  /// E_0(exp(-beta J_n) 1{J_n > B n})
  double lhs = 0.0;
  /// E_0(exp(-beta J_n) 1{J_n = 0})
  double rhs = 0.0;
  bool precondition_met = false;
  /// lhs < rhs. Only meaningful when precondition_met.
  bool holds = false;
};

/// Compares the penalized mass of walks with J_n > B n to that of self-avoiding
/// walks, exactly from the histogram. B <= B_* yields a report flagged as
/// precondition unmet.
Prop21Report verify_prop21(const SiltHistogram& hist, double beta, double B, double nu0);
/// Builds the histogram first; throws ResourceLimit beyond the walk budget.
Prop21Report verify_prop21(std::size_t n, int d, double beta, double B, double nu0,
                           const CensusOptions& options = {});

}  // namespace latwalk
