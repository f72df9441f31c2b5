#include <doctest.h>

#include <cmath>
#include <limits>

#include "latwalk/asymptotics.hpp"
#include "latwalk/ensemble.hpp"
#include "latwalk/error.hpp"

using namespace latwalk;

namespace {

RadialLaw uniform_1_to_4() {
  const std::vector<std::pair<double, double>> atoms{{1, 0.25}, {2, 0.25}, {3, 0.25}, {4, 0.25}};
  return RadialLaw::from_atoms(4, atoms);
}

// Grid 0..n with unit spacing, uniform masses.
RadialLaw lattice_law(double n) {
  std::vector<std::pair<double, double>> atoms;
  for (int x = 0; x <= static_cast<int>(n); ++x) atoms.push_back({x, 1.0 / (n + 1)});
  return RadialLaw::from_atoms(n, atoms);
}

}  // namespace

TEST_CASE("q and mu at a point") {
  const std::vector<std::pair<double, double>> atoms{{1.0, 1.0}};
  auto at = [&](double n, double beta, double a) { return AxTable::constant(RadialLaw::from_atoms(n, atoms), beta, a); };
  CHECK(*q_function(at(4, 1, 1), 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(*q_function(at(4, 0, 1), 1.0) == 1.0);
  CHECK(*q_function(at(16, 0.5, 2), 1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(*mu_function(at(16, 1, 1), 1.0) == doctest::Approx(8.0));
  CHECK(*mu_function(at(16, 4, 1), 1.0) == doctest::Approx(16.0));
  CHECK_THROWS_AS(mu_function(at(16, 0, 1), 1.0), InvalidArgument);
  CHECK(!q_function(at(4, 1, 1), 2.5).has_value());
}

TEST_CASE("property: q falls and mu grows with a_x") {
  const auto law = lattice_law(64);
  double prev_q = 2.0;
  double prev_mu = 0.0;
  for (double a = 0.05; a < 3.0; a += 0.05) {
    const auto t = AxTable::constant(law, 0.8, a);
    const double q = *q_function(t, 10.0);
    const double mu = *mu_function(t, 10.0);
    CHECK(q <= prev_q);
    CHECK(mu >= prev_mu);
    prev_q = q;
    prev_mu = mu;
  }
}

TEST_CASE("radii") {
  const auto t = AxTable::constant(lattice_law(16), 1.0, 1.0);
  CHECK(radii_r1_r2(t, 1.0, 0.0).r2 == 8.0);
  CHECK(radii_r1_r2(t, 1.0, 0.0).r1 == 8.0);
  // gamma mu n^-eps = 8 * 16^-1 = 0.5 < 1 but x = 0 still qualifies.
  CHECK(radii_r1_r2(t, 1.0, 1.0).r1 == 0.0);
  CHECK(radii_r1_r2(t, 1.0, 1.0).r2 == 8.0);
  CHECK_THROWS_AS(radii_r1_r2(t, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("property: r2 is r1 at epsilon = 0") {
  Rng rng(SeededSource{41, 0});
  for (int trial = 0; trial < 50; ++trial) {
    const double n = 32 + 16 * (trial % 5);
    auto t = AxTable::constant(lattice_law(n), 0.5 + rng.uniform(), 1.0);
    for (auto& e : t.entries) e.ax = 0.05 + 2 * rng.uniform();
    for (double gamma : {0.3, 1.0, 2.0}) {
      const double base = radii_r1_r2(t, gamma, 0.0).r1;
      for (double eps : {0.0, 0.05, 0.2, 1.0}) CHECK(radii_r1_r2(t, gamma, eps).r2 == base);
    }
  }
}

TEST_CASE("integrals on a uniform fixture") {
  const auto law = uniform_1_to_4();
  const auto flat = AxTable::constant(law, 0.0, 1.0);
  const auto rep = integrals_at(law, flat, 2.0, 2.0);
  CHECK(rep.i == doctest::Approx(2.5));
  CHECK(rep.h == doctest::Approx(1.0));
  CHECK(rep.g == doctest::Approx(1.0));
  CHECK(rep.j1 == doctest::Approx(0.75));
  CHECK(rep.j2 + rep.j3 == doctest::Approx(1.75));

  const auto d = condition_d(rep);
  CHECK(d.rho_n == doctest::Approx(7.0 / 3).epsilon(1e-15));
  CHECK(d.satisfied(2.0));
  CHECK(!d.satisfied(2.5));

  const auto below = condition_d(integrals_at(law, flat, 10.0, 10.0));
  CHECK(below.rho_n == 0.0);
  CHECK(!below.satisfied(0.01));
  const auto above = condition_d(integrals_at(law, flat, 0.5, 0.5));
  CHECK(above.infinite);
  CHECK(above.satisfied(1e6));

  AxTable none = flat;
  for (auto& e : none.entries) e.defined = false;
  CHECK_THROWS_AS(integrals_at(law, none, 2.0, 2.0), DegenerateInput);
}

TEST_CASE("property: the split reassembles I_n") {
  Rng rng(SeededSource{43, 0});
  for (int trial = 0; trial < 100; ++trial) {
    const double n = 20 + trial;
    auto t = AxTable::constant(lattice_law(n), 0.2 + rng.uniform(), 1.0);
    for (auto& e : t.entries) e.ax = 0.05 + 2 * rng.uniform();
    const auto rep = integrals(lattice_law(n), t, 0.5 + rng.uniform(), 0.1 * rng.uniform());
    CHECK(rep.r1 <= rep.r2);
    CHECK(std::abs(rep.i - (rep.j1 + rep.j2 + rep.j3)) <= 1e-9 * rep.i);
  }
}

TEST_CASE("Gaussian tail reference") {
  CHECK(gaussian_tail_reference(100, 0.0) == 1.0);
  CHECK(gaussian_tail_reference(50, std::sqrt(100.0)) == doctest::Approx(2 * std::exp(-1.0)));
  CHECK(gaussian_tail_reference(100, 100.0) == doctest::Approx(2 * std::exp(-50.0)));
  CHECK(gaussian_tail_reference(100, 100.0) > 0.0);
  double prev = 1.0;
  const double cap = std::sqrt(2 * 100 * std::log(2.0));
  for (double x = 0; x < 60; x += 0.25) {
    const double v = gaussian_tail_reference(100, x);
    CHECK(v <= 1.0);
    if (x > cap) CHECK(v < prev);
    prev = v;
  }
  CHECK(*tail_log_ratio(100, 20.0, gaussian_tail_reference(100, 20.0)) == doctest::Approx(0.0).scale(1.0));
  CHECK(!tail_log_ratio(100, 20.0, 0.0));
}

TEST_CASE("bound panel") {
  SUBCASE("constant a_x gives the quotient exactly") {
    const auto law = lattice_law(64);
    for (double a : {0.1, 1.0, 2.7}) {
      const auto p = bound_panel(law, AxTable::constant(law, 1.0, a), 1.0);
      CHECK(std::abs(p.quotient - std::sqrt(a)) <= 1e-12 * std::sqrt(a));
      CHECK(p.quotient_ok);
    }
  }
  SUBCASE("point mass at mu") {
    const double n = 16;
    const std::vector<std::pair<double, double>> atoms{{std::pow(n, 0.75), 1.0}};
    const auto law = RadialLaw::from_atoms(n, atoms);
    const auto p = bound_panel(law, AxTable::constant(law, 1.0, 1.0), 1.0);
    CHECK(p.k == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("quotient outside [sqrt a1, sqrt a2]") {
    const auto law = uniform_1_to_4();
    auto t = AxTable::constant(law, 1.0, 1.0);
    t.a1 = 2.0;
    t.a2 = 3.0;
    CHECK(!bound_panel(law, t, 1.0).quotient_ok);
  }
}

TEST_CASE("K(n) stays bounded on weakly self-avoiding ensembles") {
  std::vector<double> ks;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    EnsembleConfig c;
    c.n = n;
    c.beta = 1.0;
    c.sampler = SamplerKind::mcmc;
    c.samples = 2000;
    c.seed = {47, static_cast<std::uint32_t>(n)};
    const auto ens = sample(c);
    const auto law = distance_law(ens, {std::pow(static_cast<double>(n), 0.25)});
    ks.push_back(bound_panel(law, AxTable::constant(law, 1.0, 1.0), 1.0).k);
  }
  const auto [lo, hi] = std::minmax_element(ks.begin(), ks.end());
  CHECK(*lo > 0.0);
  // With a constant table K(n) is n^{-3/4} E chi_n, so no trend means the ratio stays O(1).
  CHECK(*hi / *lo < 1.3);
}

TEST_CASE("exponent fit") {
  SUBCASE("exact power laws") {
    for (double e : {0.75, 1.5, -0.3}) {
      std::vector<std::pair<double, double>> pts;
      for (double n : {16.0, 64.0, 256.0}) pts.push_back({n, 3.7 * std::pow(n, e)});
      const auto fit = fit_exponent(pts);
      CHECK(std::abs(fit.slope - e) <= 1e-12);
      CHECK(fit.residual_norm <= 1e-12);
      CHECK(std::exp(fit.intercept) == doctest::Approx(3.7).epsilon(1e-12));
    }
  }
  SUBCASE("random-walk mean square displacement") {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n : {64u, 128u, 256u, 512u, 1024u}) {
      EnsembleConfig c;
      c.n = n;
      c.beta = 0.0;
      c.sampler = SamplerKind::reweight;
      c.samples = 20000;
      c.seed = {53, static_cast<std::uint32_t>(n)};
      pts.push_back({static_cast<double>(n), estimate_mean(sample(c), Observable::chi2).mean});
    }
    const auto fit = fit_exponent(pts);
    CHECK(std::abs(fit.slope - 1.0) <= fit.half_width);
  }
  SUBCASE("bad input") {
    const std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
    CHECK_THROWS_AS(fit_exponent(two), InvalidArgument);
    const std::vector<std::pair<double, double>> neg{{1, 1}, {2, 2}, {3, -1}};
    CHECK_THROWS_AS(fit_exponent(neg), InvalidArgument);
  }
}

TEST_CASE("nu table") {
  CHECK(nu_formula(1) == Rational{1, 1});
  CHECK(nu_formula(2) == Rational{3, 4});
  CHECK(nu_formula(3) == Rational{7, 12});
  CHECK(nu_formula(4) == Rational{1, 2});
  CHECK(nu_formula(5) == Rational{1, 2});
  CHECK(nu_formula(40) == Rational{1, 2});
  CHECK_THROWS_AS(nu_formula(0), InvalidArgument);
}
