#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "latwalk/autocorr.hpp"
#include "latwalk/ensemble.hpp"
#include "latwalk/ensemble_io.hpp"
#include "latwalk/error.hpp"
#include "latwalk/pivot_chain.hpp"
#include "oracles.hpp"

using namespace latwalk;

namespace {

EnsembleConfig config(std::size_t n, double beta, SamplerKind kind, std::size_t samples, std::uint64_t seed = 1) {
  EnsembleConfig c;
  c.n = n;
  c.beta = beta;
  c.sampler = kind;
  c.samples = samples;
  c.seed = {seed, 0};
  return c;
}

bool within(const Estimate& e, double exact, double sigmas = 3.0) {
  return std::abs(e.mean - exact) <= sigmas * e.se;
}

}  // namespace

TEST_CASE("exact expectations for two-step walks") {
  const double b = std::log(2.0);
  CHECK(exact_expectations(2, 2, b).partition == doctest::Approx(0.875));
  for (double beta : {0.0, 0.7, 3.0}) {
    const auto e = exact_expectations(2, 2, beta);
    CHECK(e.partition == doctest::Approx((3 + std::exp(-beta)) / 4));
    CHECK(e.mean_chi == doctest::Approx((8 + 8 * std::sqrt(2.0)) / (12 + 4 * std::exp(-beta))));
  }
  CHECK(exact_expectations(2, 2, kSelfAvoiding).mean_chi == doctest::Approx((2 + 2 * std::sqrt(2.0)) / 3));
}

TEST_CASE("exact expectations agree with brute-force summation") {
  for (std::size_t n : {3u, 6u, 8u}) {
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const auto e = exact_expectations(n, 2, beta);
      const auto ref = oracle::brute_expectations(n, 2, beta);
      CAPTURE(n);
      CAPTURE(beta);
      CHECK(e.partition == doctest::Approx(ref.partition).epsilon(1e-12));
      CHECK(e.mean_chi == doctest::Approx(ref.mean_chi).epsilon(1e-12));
      CHECK(e.mean_chi2 == doctest::Approx(ref.mean_chi2).epsilon(1e-12));
    }
  }
  const auto e3 = exact_expectations(5, 3, 1.0);
  const auto r3 = oracle::brute_expectations(5, 3, 1.0);
  CHECK(e3.mean_chi2 == doctest::Approx(r3.mean_chi2).epsilon(1e-12));
  CHECK(exact_expectations(7, 2, 0.0).mean_chi2 == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("full enumeration ensemble reproduces the exact moments") {
  auto c = config(8, 1.0, SamplerKind::exact, 0);
  const auto ens = enumerate_ensemble(c);
  const auto ex = exact_expectations(8, 2, 1.0);
  CHECK(ens.size() == 65536);
  CHECK(estimate_mean(ens, Observable::chi).mean == doctest::Approx(ex.mean_chi).epsilon(1e-12));
  CHECK(estimate_mean(ens, Observable::chi).se == 0.0);
  CHECK(estimate_mean(ens, Observable::chi2).mean == doctest::Approx(ex.mean_chi2).epsilon(1e-12));
  c.n = 11;
  CHECK_THROWS_AS(enumerate_ensemble(c), ResourceLimit);
}

TEST_CASE("config validation") {
  auto c = config(10, -1.0, SamplerKind::reweight, 10);
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.beta = 1.0;
  c.window = Window{0.5, 0.5};
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.window = Window{0.0, 0.5};
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.window = Window{0.1, 0.5};
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("default window keeps beta b2 fixed") {
  for (double beta : {0.5, 1.0, 4.0}) {
    const auto w = default_window(beta);
    CHECK(beta * w.b2 == doctest::Approx(std::log(4.0)));
    CHECK(w.b1 == doctest::Approx(w.b2 / 20));
  }
}

TEST_CASE("reweighting at beta = 0 is plain random-walk sampling") {
  const auto ens = sample_reweighted(config(64, 0.0, SamplerKind::reweight, 20000, 5));
  for (const auto& r : ens.records()) REQUIRE(r.weight == 1.0);
  CHECK(ens.diagnostics().effective_samples == doctest::Approx(20000.0));
  CHECK(within(estimate_mean(ens, Observable::chi2), 64.0));
}

TEST_CASE("window filtering is exact") {
  auto c = config(10, 1.0, SamplerKind::reweight, 5000, 3);
  c.window = Window{0.1, 1.0};
  const auto ens = sample_reweighted(c);
  CHECK(ens.size() > 0);
  CHECK(ens.diagnostics().window_rejections > 0);
  for (const auto& r : ens.records()) {
    REQUIRE(r.j >= 1);
    REQUIRE(r.j <= 10);
  }
  c.sampler = SamplerKind::mcmc;
  c.n = 40;
  c.window = Window{0.2, 0.6};
  const auto mc = sample_mcmc(c);
  for (const auto& r : mc.records()) {
    REQUIRE(r.j >= 8);
    REQUIRE(r.j <= 24);
  }
}

TEST_CASE("property: samplers agree with enumeration at 3 sigma") {
  for (std::size_t n : {6u, 10u}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      CAPTURE(n);
      CAPTURE(beta);
      const auto ex = exact_expectations(n, 2, beta);
      const auto rw = sample_reweighted(config(n, beta, SamplerKind::reweight, 60000, 11));
      CHECK(within(estimate_mean(rw, Observable::chi), ex.mean_chi));
      CHECK(within(estimate_mean(rw, Observable::chi2), ex.mean_chi2));
      const auto mc = sample_mcmc(config(n, beta, SamplerKind::mcmc, 60000, 12));
      CHECK(within(estimate_mean(mc, Observable::chi), ex.mean_chi));
      CHECK(within(estimate_mean(mc, Observable::chi2), ex.mean_chi2));
    }
  }
}

TEST_CASE("MCMC at beta = 0 accepts every proposal") {
  const auto ens = sample_mcmc(config(30, 0.0, SamplerKind::mcmc, 500));
  CHECK(ens.diagnostics().acceptance_rate == 1.0);
  for (const auto& r : ens.records()) REQUIRE(r.weight == 1.0);
}

TEST_CASE("MCMC is reproducible") {
  const auto a = sample_mcmc(config(50, 1.0, SamplerKind::mcmc, 300, 99));
  const auto b = sample_mcmc(config(50, 1.0, SamplerKind::mcmc, 300, 99));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.records()[i].j == b.records()[i].j);
    REQUIRE(a.records()[i].chi == b.records()[i].chi);
  }
  const auto chains = sample_mcmc_chains(config(50, 1.0, SamplerKind::mcmc, 300, 99), 3, 3);
  const auto serial = sample_mcmc_chains(config(50, 1.0, SamplerKind::mcmc, 300, 99), 3, 1);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < 300; ++i) REQUIRE(chains[c].records()[i].chi == serial[c].records()[i].chi);
  }
  CHECK(chains[0].records()[0].chi == a.records()[0].chi);
}

TEST_CASE("self-avoiding mode never leaves the self-avoiding walks") {
  auto c = config(60, kSelfAvoiding, SamplerKind::mcmc, 400);
  c.retain_paths = true;
  c.mcmc.thinning = 5;
  const auto ens = sample_mcmc(c);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    REQUIRE(ens.records()[i].j == 0);
    REQUIRE(oracle::pairwise_silt(ens.paths()[i]) == 0);
  }
  CHECK(ens.diagnostics().acceptance_rate > 0.0);
  c.window = Window{0.1, 0.5};
  CHECK_THROWS_AS(sample_mcmc(c), InitializationError);
}

TEST_CASE("property: retained paths are valid and match their records") {
  for (auto kind : {SamplerKind::reweight, SamplerKind::mcmc}) {
    auto c = config(48, 0.7, kind, 300, 21);
    c.retain_paths = true;
    const auto ens = sample(c);
    REQUIRE(ens.paths().size() == ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const auto& p = ens.paths()[i];
      const auto& r = ens.records()[i];
      REQUIRE(p.length() == 48);
      REQUIRE(LatticePath::from_sites(p.sites()) == p);
      REQUIRE(r.j == oracle::pairwise_silt(p));
      REQUIRE(r.chi == endpoint_distance(p));
      REQUIRE(r.radius == hull_radius(p));
    }
  }
}

TEST_CASE("pivot chain keeps J_n in step with the walk") {
  for (double beta : {0.0, 0.4, 2.0}) {
    ChainSettings s;
    s.n = 80;
    s.beta = beta;
    PivotChain chain(s, Rng(SeededSource{7, 0}));
    for (int i = 0; i < 3000; ++i) {
      chain.step();
      if (i % 37 == 0) {
        REQUIRE(chain.silt() == silt_count(chain.trace()));
        REQUIRE(chain.endpoint_distance() == endpoint_distance(chain.path()));
      }
    }
  }
  ChainSettings s3;
  s3.n = 60;
  s3.d = 3;
  s3.beta = 0.5;
  PivotChain c3(s3, Rng(SeededSource{1, 1}));
  for (int i = 0; i < 2000; ++i) c3.step();
  CHECK(c3.silt() == silt_count(c3.trace()));
}

TEST_CASE("pivot chain initialisation") {
  ChainSettings s;
  s.n = 50;
  s.beta = 1.0;
  s.window = Window{30.0, 31.0};  // above the largest possible J_n = n(n+1)/2
  CHECK_THROWS_AS(PivotChain(s, Rng(SeededSource{})), InitializationError);
  s.window = Window{0.3, 0.5};
  PivotChain ok(s, Rng(SeededSource{}));
  CHECK(ok.silt() >= 15);
  CHECK(ok.silt() <= 25);
  s.window.reset();
  s.n = 1;
  CHECK_THROWS_AS(PivotChain(s, Rng(SeededSource{})), InvalidArgument);
}

TEST_CASE("integrated autocorrelation time") {
  SUBCASE("independent draws") {
    Rng rng(SeededSource{3, 0});
    std::vector<double> x(50000);
    for (auto& v : x) v = rng.uniform();
    const auto a = integrated_autocorr_time(x);
    CHECK(a.tau_int == doctest::Approx(0.5).epsilon(0.1));
    CHECK(a.window_ok);
  }
  SUBCASE("AR(1) series") {
    const double phi = 0.8;
    Rng rng(SeededSource{4, 0});
    std::vector<double> x(200000);
    double prev = 0;
    for (auto& v : x) {
      // Sum of 12 uniforms gives a unit-variance near-Gaussian innovation.
      double z = -6.0;
      for (int k = 0; k < 12; ++k) z += rng.uniform();
      v = prev = phi * prev + z;
    }
    const double expected = 0.5 * (1 + phi) / (1 - phi);
    CHECK(integrated_autocorr_time(x).tau_int == doctest::Approx(expected).epsilon(0.1));
  }
  SUBCASE("constant series") {
    const std::vector<double> x(100, 3.0);
    CHECK(integrated_autocorr_time(x).tau_int == 0.5);
    CHECK(chain_estimate(x).se == 0.0);
  }
}

TEST_CASE("pool combines by inverse variance") {
  const std::vector<Estimate> parts{{1.0, 1.0, 1.0, 10.0}, {3.0, 1.0, 2.0, 30.0}};
  const auto p = pool(parts);
  CHECK(p.mean == doctest::Approx(2.0));
  CHECK(p.se == doctest::Approx(std::sqrt(0.5)));
  CHECK(p.effective_samples == doctest::Approx(40.0));
}

TEST_CASE("distance law") {
  SUBCASE("single path") {
    auto c = config(5, 0.0, SamplerKind::reweight, 1);
    WeightedEnsemble ens(c);
    ens.add({0, 5.0, 5.0, 1.0});
    const auto law = distance_law(ens, {1.0});
    const auto bin = law.bin_of(5.0);
    REQUIRE(bin);
    CHECK(law.bins[*bin].mass == 1.0);
    CHECK(law.mean_chi == 5.0);
    CHECK(law.members[*bin] == std::vector<std::size_t>{0});
  }
  SUBCASE("empty ensemble") {
    WeightedEnsemble ens(config(5, 0.0, SamplerKind::reweight, 1));
    CHECK_THROWS_AS(distance_law(ens, {1.0}), DegenerateInput);
  }
  SUBCASE("random-walk second moment") {
    const auto ens = sample_reweighted(config(1024, 0.0, SamplerKind::reweight, 20000, 8));
    const auto law = distance_law(ens, {8.0});
    CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(within(estimate_mean(ens, Observable::chi2), law.mean_chi2, 0.0));
    CHECK(within(estimate_mean(ens, Observable::chi2), 1024.0));
    CHECK(law.bins.back().hi == 1024.0);
  }
  SUBCASE("weighted mean matches enumeration") {
    const auto ens = sample_reweighted(config(10, 1.0, SamplerKind::reweight, 50000, 2));
    const auto law = distance_law(ens, {0.5});
    CHECK(std::abs(law.total_mass() - 1.0) <= 1e-12);
    const auto est = estimate_mean(ens, Observable::chi);
    CHECK(law.mean_chi == doctest::Approx(est.mean).epsilon(1e-12));
    CHECK(within(est, exact_expectations(10, 2, 1.0).mean_chi));
  }
}

TEST_CASE("ensemble files round-trip") {
  auto c = config(20, kSelfAvoiding, SamplerKind::mcmc, 50, 4);
  c.retain_paths = true;
  c.window.reset();
  const auto ens = sample_mcmc(c);
  std::stringstream first;
  write_ensemble(first, ens);
  const auto back = read_ensemble(first);
  CHECK(std::isinf(back.config().beta));
  REQUIRE(back.size() == ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i) {
    CHECK(back.paths()[i] == ens.paths()[i]);
    CHECK(back.records()[i].chi == ens.records()[i].chi);
  }
  std::stringstream second;
  write_ensemble(second, back);
  CHECK(first.str() == second.str());

  auto rc = config(30, 0.3, SamplerKind::reweight, 40, 4);
  rc.window = Window{0.05, 0.9};
  const auto rw = sample_reweighted(rc);
  std::stringstream s;
  write_ensemble(s, rw);
  const auto rb = read_ensemble(s);
  CHECK(rb.paths().empty());
  REQUIRE(rb.config().window);
  CHECK(rb.config().window->b2 == 0.9);
  CHECK(rb.total_weight() == doctest::Approx(rw.total_weight()).epsilon(1e-15));

  std::stringstream bad("{\"config\": 1}\n");
  CHECK_THROWS(read_ensemble(bad));
}
