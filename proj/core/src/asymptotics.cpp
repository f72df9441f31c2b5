#include "latwalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "latwalk/error.hpp"
#include "numeric.hpp"

namespace latwalk {

AxTable AxTable::constant(const RadialLaw& law, double beta, double a, double r) {
  AxTable t;
  t.n = law.n;
  t.beta = beta;
  t.r = r;
  t.a1 = a;
  t.a2 = a;
  for (const auto& bin : law.bins) {
    AxEntry e;
    e.lo = bin.lo;
    e.hi = bin.hi;
    e.x = bin.x;
    e.ax = a;
    e.average = std::exp(-beta * a * std::pow(law.n, r) / 2.0);
    e.samples = 1;
    e.defined = true;
    e.missing = false;
    t.entries.push_back(e);
  }
  return t;
}

const AxEntry* AxTable::find(double x) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.lo == e.hi) {
      if (x == e.lo) return &e;
      continue;
    }
    const bool last = i + 1 == entries.size();
    if (x >= e.lo && (x < e.hi || (last && x == e.hi))) return &e;
  }
  return nullptr;
}

double invert_ax(double average, double beta, double n, double r) {
  if (!(average > 0.0)) throw InvalidArgument("a_x inversion needs a positive average");
  if (!(beta > 0.0)) throw InvalidArgument("a_x inversion needs beta > 0");
  return -(2.0 / (beta * std::pow(n, r))) * std::log(average);
}

namespace {

const AxEntry* defined_entry(const AxTable& ax, double x) {
  const auto* e = ax.find(x);
  return e && e->defined ? e : nullptr;
}

double q_of(const AxTable& ax, const AxEntry& e) {
  if (ax.beta == 0.0) return 1.0;
  return std::exp(-ax.beta * e.ax * std::pow(ax.n, ax.r) / 2.0);
}

double mu_of(const AxTable& ax, const AxEntry& e) {
  const double ba = ax.beta * e.ax;
  if (!(ba > 0.0)) throw InvalidArgument("mu_x needs beta a_x > 0");
  return std::sqrt(ba) * std::pow(ax.n, 0.75);
}

}  // namespace

std::optional<double> q_function(const AxTable& ax, double x) {
  const auto* e = defined_entry(ax, x);
  if (!e) return std::nullopt;
  return q_of(ax, *e);
}

std::optional<double> mu_function(const AxTable& ax, double x) {
  const auto* e = defined_entry(ax, x);
  if (!e) return std::nullopt;
  return mu_of(ax, *e);
}

Radii radii_r1_r2(const AxTable& ax, double gamma, double epsilon) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  auto sup = [&](double eps) {
    const double scale = gamma * std::pow(ax.n, -eps);
    double best = 0.0;
    for (const auto& e : ax.entries) {
      if (!e.defined) continue;
      if (e.x <= scale * mu_of(ax, e)) best = std::max(best, e.x);
    }
    return std::min(best, ax.n);
  };
  return {sup(epsilon), sup(0.0)};
}

IntegralReport integrals_at(const RadialLaw& law, const AxTable& ax, double r1, double r2, BandConstants band,
                         double epsilon) {
  if (law.n != ax.n) throw InvalidArgument("law and a_x table differ in n");
  IntegralReport rep;
  rep.n = law.n;
  rep.beta = ax.beta;
  rep.r1 = r1;
  rep.r2 = r2;
  detail::CompensatedSum i, g, h, j1, j2, j3, skipped;
  bool any = false;
  for (const auto& bin : law.bins) {
    const auto* e = defined_entry(ax, bin.x);
    if (!e) {
      if (bin.mass > 0.0) {
        ++rep.skipped_bins;
        skipped.add(bin.mass);
      }
      continue;
    }
    any = true;
    const double q = q_of(ax, *e);
    const double term = bin.x * q * bin.mass;
    i.add(term);
    g.add(std::sqrt(e->ax) * q * bin.mass);
    h.add(q * bin.mass);
    if (bin.x <= r1) {
      j1.add(term);
    } else if (bin.x < r2) {
      j2.add(term);
    } else {
      j3.add(term);
    }
  }
  if (!any) throw DegenerateInput("q is undefined on every bin");
  rep.i = i.value();
  rep.g = g.value();
  rep.h = h.value();
  rep.j1 = j1.value();
  rep.j2 = j2.value();
  rep.j3 = j3.value();
  rep.skipped_mass = skipped.value();
  rep.ratio = rep.g > 0.0 ? rep.i / rep.g : std::numeric_limits<double>::quiet_NaN();
  const double sb = std::sqrt(ax.beta);
  rep.band_lower = band.lower_gamma_c * sb * std::pow(rep.n, 0.75 - epsilon);
  rep.band_upper = band.upper_m * sb * std::pow(rep.n, 0.75);
  return rep;
}

IntegralReport integrals(const RadialLaw& law, const AxTable& ax, double gamma, double epsilon, BandConstants band) {
  const auto radii = radii_r1_r2(ax, gamma, epsilon);
  return integrals_at(law, ax, radii.r1, std::max(radii.r1, radii.r2), band, epsilon);
}

ConditionD condition_d(const IntegralReport& report) {
  ConditionD c;
  if (report.j1 > 0.0) {
    c.rho_n = (report.j2 + report.j3) / report.j1;
  } else {
    c.rho_n = std::numeric_limits<double>::infinity();
    c.infinite = true;
  }
  return c;
}

double gaussian_tail_reference(std::size_t n, double x) {
  if (n == 0) throw InvalidArgument("n must be >= 1");
  if (!(x >= 0.0)) throw InvalidArgument("x must be >= 0");
  return std::min(1.0, 2.0 * std::exp(-x * x / (2.0 * static_cast<double>(n))));
}

std::optional<double> tail_log_ratio(std::size_t n, double x, double tail) {
  if (!(tail > 0.0) || !(x > 0.0) || n == 0) return std::nullopt;
  return -2.0 * static_cast<double>(n) * std::log(tail / 2.0) / (x * x) - 1.0;
}

BoundPanel bound_panel(const IntegralReport& report, const AxTable& ax) {
  if (!(report.beta > 0.0)) throw InvalidArgument("bound panel needs beta > 0");
  BoundPanel p;
  p.integrals = report;
  const double scale = std::sqrt(report.beta) * std::pow(report.n, 0.75);
  if (!(report.g > 0.0) || !(report.h > 0.0)) throw DegenerateInput("g_n or h_n vanishes");
  p.k = report.i / (scale * report.g);
  p.k_lower = report.i / (scale * report.h);
  p.quotient = report.g / report.h;
  const double tol = 1e-12;
  p.quotient_ok = p.quotient >= std::sqrt(ax.a1) * (1.0 - tol) && p.quotient <= std::sqrt(ax.a2) * (1.0 + tol);
  return p;
}

BoundPanel bound_panel(const RadialLaw& law, const AxTable& ax, double beta) {
  AxTable table = ax;
  table.beta = beta;
  return bound_panel(integrals_at(law, table, law.n, law.n), table);
}

ExponentFit fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw InvalidArgument("exponent fit needs at least 3 points");
  ExponentFit fit;
  fit.points.assign(points.begin(), points.end());
  std::vector<double> lx, ly;
  for (const auto& [n, v] : points) {
    if (!(n > 0.0)) throw InvalidArgument("fit abscissa must be positive");
    if (!(v > 0.0)) throw InvalidArgument("fit values must be positive");
    lx.push_back(std::log(n));
    ly.push_back(std::log(v));
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit needs at least two distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += r * r;
  }
  fit.residual_norm = std::sqrt(ssr);
  const double dof = k - 2.0;
  const double se = std::sqrt(ssr / dof / sxx);
  const boost::math::students_t dist(dof);
  fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  return fit;
}

Rational nu_formula(int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (d == 1) return {1, 1};
  // 1/4 + 1/d = (d + 4) / (4d), which is >= 1/2 exactly when d <= 4.
  if (d >= 4) return {1, 2};
  std::int64_t num = d + 4;
  std::int64_t den = 4 * d;
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace latwalk
