#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/poisson.hpp>

#include "latwalk/asymptotics.hpp"
#include "latwalk/census.hpp"
#include "latwalk/cone_palm.hpp"
#include "latwalk/csv.hpp"
#include "latwalk/ensemble_io.hpp"
#include "latwalk/error.hpp"
#include "latwalk/harness.hpp"

namespace latwalk::studies {

namespace {

std::string beta_label(double beta) { return std::isinf(beta) ? std::string("inf") : format_double(beta); }

std::string fmt_range(double lo, double hi) { return "[" + format_double(lo) + ", " + format_double(hi) + "]"; }

template <class Fn>
std::string csv_text(Fn&& fill) {
  std::ostringstream ss;
  CsvWriter w(ss);
  fill(w);
  return ss.str();
}

void add_predicate(RunManifest& m, std::string name, bool passed, std::string detail) {
  m.predicates.push_back({std::move(name), passed, std::move(detail)});
}

/// Streams are handed out per grid task: task t owns streams [t * 1024, t * 1024 + chains).
constexpr std::uint32_t kStreamsPerTask = 1024;

EnsembleConfig ensemble_config(const ExperimentSpec& spec, std::size_t n, double beta, std::size_t task) {
  EnsembleConfig cfg;
  cfg.n = n;
  cfg.d = spec.d;
  cfg.beta = beta;
  cfg.samples = spec.sampler.samples;
  cfg.sampler = spec.sampler.kind;
  cfg.seed = {spec.seed, static_cast<std::uint32_t>(task) * kStreamsPerTask};
  cfg.mcmc = spec.sampler.mcmc;
  if (spec.sampler.target_ess > 0.0) {
    cfg.mcmc.min_effective_samples = spec.sampler.target_ess / static_cast<double>(spec.sampler.chains);
  }
  return cfg;
}

/// All chains of one grid point, or a single weighted ensemble.
struct GridRun {
  std::vector<WeightedEnsemble> parts;
  Estimate chi;
  Estimate chi2;
  Estimate silt;
  double effective_samples = 0.0;
  double acceptance = 0.0;
};

GridRun run_grid_point(const ExperimentSpec& spec, RunManifest& m, EnsembleConfig cfg, const std::string& label) {
  GridRun run;
  if (cfg.sampler == SamplerKind::mcmc) {
    for (std::size_t c = 0; c < spec.sampler.chains; ++c) {
      m.tasks.push_back({label + "/chain" + std::to_string(c), cfg.seed.seed, cfg.seed.stream + static_cast<std::uint32_t>(c)});
    }
    run.parts = sample_mcmc_chains(cfg, spec.sampler.chains, spec.threads);
  } else {
    m.tasks.push_back({label, cfg.seed.seed, cfg.seed.stream});
    run.parts.push_back(sample(cfg));
  }
  std::vector<Estimate> chi, chi2, silt;
  for (const auto& e : run.parts) {
    chi.push_back(estimate_mean(e, Observable::chi));
    chi2.push_back(estimate_mean(e, Observable::chi2));
    silt.push_back(estimate_mean(e, Observable::silt));
    run.acceptance += e.diagnostics().acceptance_rate / static_cast<double>(run.parts.size());
  }
  run.chi = pool(chi);
  run.chi2 = pool(chi2);
  run.silt = pool(silt);
  run.effective_samples = std::min(run.chi.effective_samples, run.chi2.effective_samples);
  if (spec.sampler.save_ensembles) {
    for (std::size_t c = 0; c < run.parts.size(); ++c) {
      std::ostringstream ss;
      write_ensemble(ss, run.parts[c]);
      write_artifact(spec, m, "ensemble_" + label + "_" + std::to_string(c) + ".txt", ss.str());
    }
  }
  return run;
}

std::string grid_label(std::size_t n, double beta) { return "n" + std::to_string(n) + "_b" + beta_label(beta); }

/// Every retained record of a run merged into one ensemble (chains are equal-weight).
WeightedEnsemble merged(const GridRun& run) {
  EnsembleConfig cfg = run.parts.front().config();
  cfg.retain_paths = true;
  WeightedEnsemble all(cfg);
  for (const auto& e : run.parts) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e.paths().size() == e.size()) {
        all.add(e.records()[i], e.paths()[i]);
      } else {
        all.add(e.records()[i]);
      }
    }
  }
  return all;
}

std::string class_of(const LineClassification& c, std::size_t line) {
  auto has = [line](const std::vector<std::size_t>& v) { return std::find(v.begin(), v.end(), line) != v.end(); };
  if (has(c.empty)) return "empty";
  if (has(c.minus)) return "minus";
  if (has(c.plus)) return "plus";
  return has(c.half) ? "half" : "half_pm";
}

std::string decomposition_csv(const ConeDecomposition& dec, const LineClassification& cls) {
  return csv_text([&](CsvWriter& w) {
    w.header({"line", "angle", "mass", "class"});
    for (std::size_t k = 0; k < dec.size(); ++k) w.row(k, dec.angles[k], dec.mass(k), class_of(cls, k));
  });
}

std::string ax_csv(const AxTable& ax) {
  return csv_text([&](CsvWriter& w) {
    w.header({"x_lo", "x_hi", "x", "a_x", "samples", "empty_class", "defined"});
    for (const auto& e : ax.entries) w.row(e.lo, e.hi, e.x, e.ax, e.samples, e.empty_class, e.defined);
  });
}

}  // namespace

void census(const ExperimentSpec& spec, RunManifest& m) {
  const auto n_max = *std::max_element(spec.n_grid.begin(), spec.n_grid.end());
  CensusOptions opt;
  opt.threads = spec.threads;
  const auto table = enumerate_saw(n_max, spec.d, opt);
  const auto est = connective_estimate(table);

  bool band = true;
  write_artifact(spec, m, "census.csv", csv_text([&](CsvWriter& w) {
                   w.header({"n", "count", "mu_n", "in_band"});
                   for (std::size_t i = 0; i < est.roots.size(); ++i) {
                     const auto n = est.roots[i].first;
                     const bool ok = within_connective_band(table, n);
                     band = band && ok;
                     w.row(n, table.at(n).str(), est.roots[i].second, ok);
                   }
                 }));
  const auto bad = submultiplicativity_violations(table);
  nlohmann::json summary = {{"n_max", n_max}, {"d", spec.d}, {"mu", est.mu}, {"nu0", est.nu0}};
  write_artifact(spec, m, "census.json", summary.dump(2) + "\n");
  add_predicate(m, "connective-band", band, "d^n <= c_n <= 2d(2d-1)^(n-1) for n <= " + std::to_string(n_max));
  add_predicate(m, "submultiplicative", bad.empty(), std::to_string(bad.size()) + " violating pairs");
}

void exact_small_n(const ExperimentSpec& spec, RunManifest& m) {
  CensusOptions opt;
  opt.threads = spec.threads;
  const auto saw = enumerate_saw(std::min<std::size_t>(default_saw_budget(spec.d), 14), spec.d, opt);
  const double nu0 = connective_estimate(saw).nu0;
  const double factor = spec.param("prop21.b_factor", 2.0);

  std::ostringstream exact_text, hist_text, prop_text;
  CsvWriter exact(exact_text), hist(hist_text), prop(prop_text);
  exact.header({"n", "beta", "partition", "mean_chi", "mean_chi2"});
  hist.header({"n", "j", "count", "probability"});
  prop.header({"n", "beta", "B", "bstar", "lhs", "rhs", "precondition", "holds"});
  for (auto n : spec.n_grid) {
    const auto walks = enumerate_walks(n, spec.d, opt);
    const auto h = silt_histogram(walks);
    for (const auto& [j, c] : h.cells()) hist.row(n, j, c.str(), h.probability_eq(j));
    for (double beta : spec.betas) {
      const auto ex = exact_expectations(walks, beta);
      exact.row(n, beta_label(beta), ex.partition, ex.mean_chi, ex.mean_chi2);
      if (beta > 0.0 && !std::isinf(beta)) {
        const double bstar = threshold_bstar(beta, nu0, spec.d);
        const auto r = verify_prop21(h, beta, factor * bstar, nu0);
        prop.row(n, beta_label(beta), r.B, r.bstar, r.lhs, r.rhs, r.precondition_met, r.holds);
      }
    }
  }
  write_artifact(spec, m, "exact.csv", exact_text.str());
  write_artifact(spec, m, "silt_histogram.csv", hist_text.str());
  write_artifact(spec, m, "prop21.csv", prop_text.str());
}

void srw_baseline(const ExperimentSpec& spec, RunManifest& m) {
  std::vector<std::pair<double, double>> msd;
  double last_ratio = 0.0;
  std::size_t last_n = 0;
  std::size_t task = 0;
  const std::string text = csv_text([&](CsvWriter& w) {
    w.header({"n", "beta", "samples", "mean_j", "se_j", "j_over_nlogn_pi", "mean_chi", "se_chi", "mean_chi2", "se_chi2"});
    for (double beta : spec.betas) {
      for (auto n : spec.n_grid) {
        const auto run = run_grid_point(spec, m, ensemble_config(spec, n, beta, task++), grid_label(n, beta));
        const double nd = static_cast<double>(n);
        const double ratio = run.silt.mean / (nd * std::log(nd) / std::numbers::pi);
        std::size_t samples = 0;
        for (const auto& e : run.parts) samples += e.size();
        w.row(n, beta_label(beta), samples, run.silt.mean, run.silt.se, ratio, run.chi.mean, run.chi.se, run.chi2.mean,
              run.chi2.se);
        if (beta == 0.0) {
          msd.emplace_back(nd, run.chi2.mean);
          if (n >= last_n) {
            last_n = n;
            last_ratio = ratio;
          }
        }
      }
    }
  });
  write_artifact(spec, m, "baseline.csv", text);
  if (msd.empty()) return;
  const auto lo = spec.param("predicate.silt_lo", 0.7);
  const auto hi = spec.param("predicate.silt_hi", 1.3);
  add_predicate(m, "silt-growth n=" + std::to_string(last_n), last_ratio >= lo && last_ratio <= hi,
                "E J / (n ln n / pi) = " + format_double(last_ratio) + " in " + fmt_range(lo, hi));
  if (msd.size() >= 3) {
    const auto fit = fit_exponent(msd);
    add_predicate(m, "srw-msd-slope", fit.slope >= 0.97 && fit.slope <= 1.03,
                  "slope " + format_double(fit.slope) + " in [0.97, 1.03]");
  }
}

void exponent(const ExperimentSpec& spec, RunManifest& m) {
  std::map<double, std::vector<std::pair<double, double>>> chi_pts, chi2_pts;
  std::map<double, double> min_ess;
  std::size_t task = 0;
  const std::string rows = csv_text([&](CsvWriter& w) {
    w.header({"beta", "n", "mean_chi", "se_chi", "mean_chi2", "se_chi2", "effective_samples", "tau_chi", "tau_chi2",
              "acceptance"});
    for (double beta : spec.betas) {
      min_ess[beta] = std::numeric_limits<double>::infinity();
      for (auto n : spec.n_grid) {
        const auto run = run_grid_point(spec, m, ensemble_config(spec, n, beta, task++), grid_label(n, beta));
        w.row(beta_label(beta), n, run.chi.mean, run.chi.se, run.chi2.mean, run.chi2.se, run.effective_samples,
              run.chi.tau_int, run.chi2.tau_int, run.acceptance);
        chi_pts[beta].emplace_back(static_cast<double>(n), run.chi.mean);
        chi2_pts[beta].emplace_back(static_cast<double>(n), run.chi2.mean);
        min_ess[beta] = std::min(min_ess[beta], run.effective_samples);
      }
    }
  });
  write_artifact(spec, m, "exponent.csv", rows);

  nlohmann::json summary = nlohmann::json::array();
  std::ostringstream fits_text;
  CsvWriter fits(fits_text);
  fits.header({"beta", "observable", "slope", "half_width", "intercept", "residual_norm"});
  for (double beta : spec.betas) {
    if (chi_pts[beta].size() < 3) continue;
    const auto f1 = fit_exponent(chi_pts[beta]);
    const auto f2 = fit_exponent(chi2_pts[beta]);
    fits.row(beta_label(beta), "chi", f1.slope, f1.half_width, f1.intercept, f1.residual_norm);
    fits.row(beta_label(beta), "chi2", f2.slope, f2.half_width, f2.intercept, f2.residual_norm);
    summary.push_back({{"beta", beta_label(beta)},
                       {"slope_chi", f1.slope},
                       {"ci_chi", f1.half_width},
                       {"slope_chi2", f2.slope},
                       {"ci_chi2", f2.half_width}});
    const std::string tag = " beta=" + beta_label(beta);
    if (beta == 0.0) {
      add_predicate(m, "msd-slope" + tag, f2.slope >= 0.97 && f2.slope <= 1.03,
                    "slope " + format_double(f2.slope) + " in [0.97, 1.03]");
    } else {
      if (!std::isinf(beta)) {
        const auto lo = spec.param("predicate.chi_lo", 0.70), hi = spec.param("predicate.chi_hi", 0.80);
        add_predicate(m, "distance-slope" + tag, f1.slope >= lo && f1.slope <= hi,
                      "slope " + format_double(f1.slope) + " in " + fmt_range(lo, hi));
      }
      const auto lo = spec.param("predicate.chi2_lo", 1.44), hi = spec.param("predicate.chi2_hi", 1.56);
      add_predicate(m, "msd-slope" + tag, f2.slope >= lo && f2.slope <= hi,
                    "slope " + format_double(f2.slope) + " in " + fmt_range(lo, hi));
    }
    if (spec.sampler.target_ess > 0.0) {
      add_predicate(m, "effective-samples" + tag, min_ess[beta] >= spec.sampler.target_ess,
                    "min " + format_double(min_ess[beta]) + " >= " + format_double(spec.sampler.target_ess));
    }
  }
  write_artifact(spec, m, "fits.csv", fits_text.str());
  write_artifact(spec, m, "exponent.json", summary.dump(2) + "\n");
}

void shape_study(const ExperimentSpec& spec, RunManifest& m) {
  const double a1 = spec.param("shape.a1", 0.05);
  const double a2 = spec.param("shape.a2", 2.0);
  const double delta = spec.param("shape.delta", 0.1);
  const double rho = spec.param("shape.rho", 0.25);
  const double v = spec.param("shape.v", 1.0);
  const double step = spec.param("shape.grid_step", 0.0);

  bool conserved = true;
  bool exhaustive = true;
  std::size_t task = 0;
  std::ostringstream rows_text;
  CsvWriter rows(rows_text);
  rows.header({"beta", "n", "realizations", "positive_j", "with_band", "circular", "circular_fraction", "mean_bands"});
  for (double beta : spec.betas) {
    for (auto n : spec.n_grid) {
      auto cfg = ensemble_config(spec, n, beta, task++);
      cfg.retain_paths = true;
      const auto label = grid_label(n, beta);
      const auto ens = merged(run_grid_point(spec, m, cfg, label));
      const auto lines = TestLineSet::for_length(n, v);
      std::size_t positive = 0, with_band = 0, circular = 0, bands = 0;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto dec = cone_decompose(extract_process(ens.paths()[i]), lines);
        conserved = conserved && dec.conserves_mass();
        if (i == 0) {
          write_artifact(spec, m, "decomposition_" + label + ".csv",
                         decomposition_csv(dec, classify_lines(dec, a1, a2, std::min(delta, 0.49))));
        }
        if (dec.j == 0) continue;
        ++positive;
        const auto rep = detect_shapes(dec, a1, a2, delta, rho, step);
        with_band += !rep.detected.empty();
        circular += rep.circular;
        bands += rep.detected.size();
      }
      exhaustive = exhaustive && with_band == positive;
      const double pd = static_cast<double>(std::max<std::size_t>(positive, 1));
      rows.row(beta_label(beta), n, ens.size(), positive, with_band, circular, static_cast<double>(circular) / pd,
               static_cast<double>(bands) / pd);
      if (beta > 0.0 && !std::isinf(beta)) {
        const auto law = distance_law(ens, {std::pow(static_cast<double>(n), 0.25)});
        write_artifact(spec, m, "ax_" + label + ".csv", ax_csv(estimate_ax(ens, law, lines, a1, a2, beta, 0.5, spec.threads)));
      }
    }
  }
  write_artifact(spec, m, "shapes.csv", rows_text.str());
  add_predicate(m, "cone-mass-conservation", conserved, "sum of cone masses equals J_n on every decomposition");
  add_predicate(m, "shape-exhaustive", exhaustive, "every realization with J_n > 0 has a detected band");
}

void condition_d(const ExperimentSpec& spec, RunManifest& m) {
  const double a1 = spec.param("shape.a1", 0.05);
  const double a2 = spec.param("shape.a2", 2.0);
  const double v = spec.param("shape.v", 1.0);
  const double r = spec.param("condition.r", 0.5);
  const double gamma = spec.param("condition.gamma", 1.0);
  const double epsilon = spec.param("condition.epsilon", 0.05);
  const double rho_star = spec.param("condition.rho_star", 1.0);
  const double width_factor = spec.param("condition.bin_factor", 1.0);
  const BandConstants band{spec.param("condition.upper_m", 1.0), spec.param("condition.lower_gamma_c", 1.0)};

  bool quotient_ok = true;
  std::map<double, std::vector<std::pair<double, double>>> k_pts;
  nlohmann::json summary = nlohmann::json::array();
  std::size_t task = 0;
  std::ostringstream rows_text;
  CsvWriter rows(rows_text);
  rows.header({"n", "beta", "bin_width", "r1", "r2", "I", "g", "h", "J1", "J2", "J3", "rho_n", "rho_star_met", "K",
               "K_lower", "quotient", "quotient_ok", "skipped_mass", "band_lower", "band_upper"});
  for (double beta : spec.betas) {
    if (!(beta > 0.0) || std::isinf(beta)) throw InvalidArgument("condition-d needs finite beta > 0");
    for (auto n : spec.n_grid) {
      auto cfg = ensemble_config(spec, n, beta, task++);
      cfg.retain_paths = true;
      const auto label = grid_label(n, beta);
      const auto ens = merged(run_grid_point(spec, m, cfg, label));
      const double width = width_factor * std::pow(static_cast<double>(n), 0.25);
      const auto law = distance_law(ens, {width});
      const auto ax = estimate_ax(ens, law, TestLineSet::for_length(n, v), a1, a2, beta, r, spec.threads);
      write_artifact(spec, m, "ax_" + label + ".csv", ax_csv(ax));
      const auto rep = integrals(law, ax, gamma, epsilon, band);
      const auto cond = condition_d(rep);
      const auto panel = bound_panel(rep, ax);
      quotient_ok = quotient_ok && panel.quotient_ok;
      rows.row(n, beta_label(beta), width, rep.r1, rep.r2, rep.i, rep.g, rep.h, rep.j1, rep.j2, rep.j3, cond.rho_n,
               cond.satisfied(rho_star), panel.k, panel.k_lower, panel.quotient, panel.quotient_ok, rep.skipped_mass,
               rep.band_lower, rep.band_upper);
      k_pts[beta].emplace_back(static_cast<double>(n), panel.k);
      summary.push_back({{"n", n},
                         {"beta", beta},
                         {"I", rep.i},
                         {"g", rep.g},
                         {"h", rep.h},
                         {"rho_n", cond.infinite ? nlohmann::json("inf") : nlohmann::json(cond.rho_n)},
                         {"K", panel.k}});
    }
  }
  for (auto& row : summary) {
    const auto& pts = k_pts[row["beta"].get<double>()];
    if (pts.size() >= 3) {
      const auto fit = fit_exponent(pts);
      row["slope"] = fit.slope;
      row["ci"] = fit.half_width;
    } else {
      row["slope"] = nullptr;
      row["ci"] = nullptr;
    }
  }
  write_artifact(spec, m, "condition_d.csv", rows_text.str());
  write_artifact(spec, m, "condition_d.json", summary.dump(2) + "\n");
  add_predicate(m, "quotient-bound", quotient_ok, "sqrt(a1) <= g_n / h_n <= sqrt(a2) at every grid point");
}

void convex_hull(const ExperimentSpec& spec, RunManifest& m) {
  const double slack = spec.param("hull.slack", 0.1);
  const auto grid = static_cast<std::size_t>(spec.param("hull.grid", 64.0));
  std::size_t task = 0;
  for (double beta : spec.betas) {
    for (auto n : spec.n_grid) {
      const auto label = grid_label(n, beta);
      const auto ens = merged(run_grid_point(spec, m, ensemble_config(spec, n, beta, task++), label));
      const auto rep = report_convex_hull(ens, slack, grid);
      write_artifact(spec, m, "hull_" + label + ".csv", csv_text([&](CsvWriter& w) {
                       w.header({"x", "tail_radius", "tail_chi", "ratio", "gaussian_reference"});
                       for (const auto& r : rep.rows) w.row(r.x, r.tail_radius, r.tail_chi, r.ratio, r.gaussian);
                     }));
      add_predicate(m, "hull-pathwise " + label, rep.pathwise_ok, "R_n >= chi_n on every record");
      add_predicate(m, "hull-lower " + label, rep.lower_ok, "min ratio " + format_double(rep.min_ratio) + " >= 1");
      if (beta == 0.0) {
        add_predicate(m, "hull-upper " + label, rep.upper_ok,
                      "max ratio " + format_double(rep.max_ratio) + " <= " + format_double(2.0 * (1.0 + slack)) +
                          (rep.coverage_warning ? " (coverage warning)" : ""));
      }
    }
  }
}

void palm_poisson(const ExperimentSpec& spec, RunManifest& m) {
  const auto intensities = spec.param_list("palm.intensity", {0.5, 1.0, 2.0});
  const auto areas = spec.param_list("palm.area", {0.5, 1.0});
  const double points = spec.param("palm.points", 1e5);
  const double beta = spec.param("palm.beta", 1.0);
  const double s1 = spec.param("palm.s1", 0.0);
  const double s2 = spec.param("palm.s2", 1e9);

  bool ok = true;
  std::uint32_t task = 0;
  const std::string text = csv_text([&](CsvWriter& w) {
    w.header({"intensity", "area", "radius", "centers", "fraction", "se", "expected", "z", "marked_average", "marked_se",
              "marked_expected", "marked_z"});
    for (double lambda : intensities) {
      for (double area : areas) {
        const double r = std::sqrt(area / std::numbers::pi);
        // Inner (center) square sized for the requested number of centers.
        const double inner = std::sqrt(points / lambda);
        const Box window{0.0, 0.0, inner + 2.0 * r, inner + 2.0 * r};
        const SeededSource src{spec.seed, task * kStreamsPerTask};
        m.tasks.push_back({"palm_l" + format_double(lambda) + "_a" + format_double(area), src.seed, src.stream});
        ++task;
        const auto pts = poisson_points(lambda, window, src);
        const auto est = palm_empty_ball(pts, window, r);
        const double expected = std::exp(-lambda * area);
        const double z = (est.fraction - expected) / est.se;
        const auto mark = palm_marked_points(pts, window, r, beta, static_cast<std::size_t>(s1),
                                             static_cast<std::size_t>(std::min(s2, 1e18)));
        const boost::math::poisson_distribution<double> pois(lambda * area);
        double mark_expected = 0.0;
        for (std::size_t k = static_cast<std::size_t>(s1); k <= static_cast<std::size_t>(std::min(s2, 1e4)); ++k) {
          const double p = boost::math::pdf(pois, static_cast<double>(k));
          mark_expected += std::exp(-beta * static_cast<double>(k)) * p;
          if (k > lambda * area + 50 && p < 1e-300) break;
        }
        const double mz = (mark.average - mark_expected) / mark.se;
        ok = ok && std::abs(z) <= 3.0 && std::abs(mz) <= 3.0;
        w.row(lambda, area, r, est.centers, est.fraction, est.se, expected, z, mark.average, mark.se, mark_expected, mz);
      }
    }
  });
  write_artifact(spec, m, "palm.csv", text);
  add_predicate(m, "palm-poisson-3sigma", ok, "empty-ball and marked averages within 3 standard errors");
}

void nu_table(const ExperimentSpec& spec, RunManifest& m) {
  const auto dims = spec.param_list("nu.dimensions", {1, 2, 3, 4});
  const std::map<int, Rational> known = {{1, {1, 1}}, {2, {3, 4}}, {3, {7, 12}}};
  bool ok = true;
  write_artifact(spec, m, "nu.csv", csv_text([&](CsvWriter& w) {
                   w.header({"d", "nu", "value"});
                   for (double dd : dims) {
                     const int d = static_cast<int>(dd);
                     const auto nu = nu_formula(d);
                     const auto it = known.find(d);
                     const Rational want = it != known.end() ? it->second : Rational{1, 2};
                     ok = ok && nu == want;
                     const std::string text =
                         nu.den == 1 ? std::to_string(nu.num) : std::to_string(nu.num) + "/" + std::to_string(nu.den);
                     w.row(d, text, nu.value());
                   }
                 }));
  add_predicate(m, "nu-table", ok, "nu(d) = 1, 3/4, 7/12, then 1/2");
}

}  // namespace latwalk::studies
