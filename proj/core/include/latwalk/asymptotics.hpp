#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "latwalk/radial_law.hpp"

namespace latwalk {

/// a_x per endpoint-distance bin.
struct AxEntry {
  double lo = 0.0;
  double hi = 0.0;
  /// Representative distance (bin midpoint).
  double x = 0.0;
  double ax = 0.0;
  /// Weighted mean of the within-realization class averages of exp(-beta |C_L|).
  double average = 0.0;
  /// Realizations that entered the average.
  std::size_t samples = 0;
  /// Realizations dropped because their line class was empty.
  std::size_t empty_class = 0;
  /// False when the bin has no usable realization or its average is 0.
  bool defined = false;
  /// True when the bin had no members at all.
  bool missing = true;
};

struct AxTable {
  double n = 0.0;
  double beta = 0.0;
  /// Class exponent: lines with 2|C_L| in [a1 n^r, a2 n^r].
  double r = 0.5;
  double a1 = 0.0;
  double a2 = 0.0;
  std::vector<AxEntry> entries;

  double zeta() const { return beta * a1; }
  /// Table with one entry per bin of `law`, all carrying the same a.
  static AxTable constant(const RadialLaw& law, double beta, double a, double r = 0.5);
  /// Entry whose bin contains x (degenerate bins match exactly).
  const AxEntry* find(double x) const;
};

/// a = -(2 / (beta n^r)) ln(average).
double invert_ax(double average, double beta, double n, double r);

/// exp(-beta a_x n^r / 2); nullopt when x has no defined entry.
std::optional<double> q_function(const AxTable& ax, double x);

/// (beta a_x)^{1/2} n^{3/4}; nullopt when x has no defined entry.
/// Throws InvalidArgument when beta a_x = 0.
std::optional<double> mu_function(const AxTable& ax, double x);

struct Radii {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// r1 = sup{x in grid : x <= gamma mu_x n^{-eps}} (0 when empty), r2 = r1 at eps = 0.
Radii radii_r1_r2(const AxTable& ax, double gamma, double epsilon);

/// Reporting constants for the I_n / g_n band; never asserted.
struct BandConstants {
  double upper_m = 1.0;
  double lower_gamma_c = 1.0;
};

struct IntegralReport {
  double n = 0.0;
  double beta = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  /// int x q dP, int sqrt(a_x) q dP, int q dP.
  double i = 0.0;
  double g = 0.0;
  double h = 0.0;
  /// x q dP over [0, r1], (r1, r2), [r2, n] (excluding [0, r1]).
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
  double ratio = 0.0;
  double band_lower = 0.0;
  double band_upper = 0.0;
  /// Bins skipped because q was undefined there, and their law mass.
  std::size_t skipped_bins = 0;
  double skipped_mass = 0.0;
};

/// Stieltjes sums over the law's bins at their representative points, split at r1 <= r2.
IntegralReport integrals_at(const RadialLaw& law, const AxTable& ax, double r1, double r2,
                         BandConstants band = {}, double epsilon = 0.0);
/// Radii from radii_r1_r2(ax, gamma, epsilon).
IntegralReport integrals(const RadialLaw& law, const AxTable& ax, double gamma, double epsilon,
                         BandConstants band = {});

struct ConditionD {
  /// (J2 + J3) / J1; +inf when J1 = 0.
  double rho_n = 0.0;
  bool infinite = false;
  bool satisfied(double rho_star) const { return infinite || rho_n >= rho_star; }
};

ConditionD condition_d(const IntegralReport& report);

/// min(1, 2 exp(-x^2 / (2n))).
double gaussian_tail_reference(std::size_t n, double x);

/// Empirical xi_x solving tail = 2 exp(-x^2 (1 + xi) / (2n)); nullopt when tail <= 0 or x = 0.
std::optional<double> tail_log_ratio(std::size_t n, double x, double tail);

struct BoundPanel {
  IntegralReport integrals;
  /// K(n) = I_n / (beta^{1/2} n^{3/4} g_n).
  double k = 0.0;
  /// I_n / (beta^{1/2} n^{3/4} h_n), the companion normalization.
  double k_lower = 0.0;
  double quotient = 0.0;
  bool quotient_ok = false;
};

/// Uses r1 = r2 = n (no split) unless given a report.
BoundPanel bound_panel(const RadialLaw& law, const AxTable& ax, double beta);
BoundPanel bound_panel(const IntegralReport& report, const AxTable& ax);

struct ExponentFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
  /// 95% Student-t half-width of the slope.
  double half_width = 0.0;
};

/// Ordinary least squares of ln(value) on ln(n).
ExponentFit fit_exponent(std::span<const std::pair<double, double>> points);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// max(1/2, 1/4 + 1/d) for d >= 2, 1 for d = 1.
Rational nu_formula(int d);

}  // namespace latwalk
