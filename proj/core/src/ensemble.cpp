#include "latwalk/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latwalk/error.hpp"
#include "latwalk/pivot_chain.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace latwalk {

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::exact:
      return "exact";
    case SamplerKind::reweight:
      return "reweight";
    case SamplerKind::mcmc:
      return "mcmc";
  }
  return "unknown";
}

SamplerKind sampler_from_string(const std::string& name) {
  if (name == "exact") return SamplerKind::exact;
  if (name == "reweight") return SamplerKind::reweight;
  if (name == "mcmc") return SamplerKind::mcmc;
  throw InvalidArgument("unknown sampler '" + name + "'");
}

Window default_window(double beta, double c, double ratio) {
  if (!(beta > 0.0) || std::isinf(beta)) throw InvalidArgument("default window needs finite beta > 0");
  if (!(c > 0.0) || !(ratio > 1.0)) throw InvalidArgument("default window needs c > 0 and ratio > 1");
  const double b2 = c / beta;
  return {b2 / ratio, b2};
}

void validate(const EnsembleConfig& cfg) {
  if (cfg.d < 1 || cfg.d > kMaxDimension) throw InvalidArgument("dimension out of range");
  if (!(cfg.beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  if (cfg.window && !(cfg.window->b1 > 0.0 && cfg.window->b1 < cfg.window->b2)) {
    throw InvalidArgument("window needs 0 < b1 < b2");
  }
  if (cfg.n > max_steps(cfg.d)) throw InvalidArgument("walk length exceeds the step cap");
}

// --- WeightedEnsemble --------------------------------------------------------

void WeightedEnsemble::add(const EnsembleRecord& record) {
  if (!(record.weight > 0.0)) throw InvalidArgument("ensemble weights must be positive");
  records_.push_back(record);
  // Neumaier running sum of weights.
  const double t = total_weight_ + record.weight;
  if (std::fabs(total_weight_) >= std::fabs(record.weight)) {
    compensation_ += (total_weight_ - t) + record.weight;
  } else {
    compensation_ += (record.weight - t) + total_weight_;
  }
  total_weight_ = t;
}

void WeightedEnsemble::add(const EnsembleRecord& record, LatticePath path) {
  if (paths_.size() != records_.size()) throw std::logic_error("mixing records with and without paths");
  add(record);
  paths_.push_back(std::move(path));
}

// --- exact -------------------------------------------------------------------

ExactExpectations exact_expectations(const WalkCensus& census, double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
  long double z = 0.0L;
  long double chi = 0.0L;
  long double chi2 = 0.0L;
  long double total = 0.0L;
  for (const auto& [key, count] : census.cells) {
    const auto [j, r2] = key;
    const long double c = static_cast<long double>(count);
    total += c;
    long double w;
    if (std::isinf(beta)) {
      w = j == 0 ? 1.0L : 0.0L;
    } else {
      w = std::exp(-static_cast<long double>(beta) * static_cast<long double>(j));
    }
    z += c * w;
    chi += c * w * std::sqrt(static_cast<long double>(r2));
    chi2 += c * w * static_cast<long double>(r2);
  }
  ExactExpectations out;
  out.partition = static_cast<double>(z / total);
  out.mean_chi = static_cast<double>(chi / z);
  out.mean_chi2 = static_cast<double>(chi2 / z);
  return out;
}

ExactExpectations exact_expectations(std::size_t n, int d, double beta, const CensusOptions& options) {
  return exact_expectations(enumerate_walks(n, d, options), beta);
}

namespace {

double penalty_weight(double beta, std::uint64_t j) {
  if (j == 0 || beta == 0.0) return 1.0;
  if (std::isinf(beta)) return 0.0;
  return std::exp(-beta * static_cast<double>(j));
}

bool in_window(const EnsembleConfig& cfg, std::uint64_t j) {
  if (!cfg.window) return true;
  const double n = static_cast<double>(cfg.n);
  const double value = static_cast<double>(j);
  return value >= cfg.window->b1 * n && value <= cfg.window->b2 * n;
}

EnsembleRecord summarise(const SiteTrace& trace, double beta) {
  EnsembleRecord rec;
  rec.j = silt_count(trace);
  rec.chi = trace.site(trace.steps()).norm();
  rec.radius = hull_radius(trace);
  rec.weight = penalty_weight(beta, rec.j);
  return rec;
}

void finish_weighted(WeightedEnsemble& ens) {
  double sw = 0.0;
  double sw2 = 0.0;
  for (const auto& r : ens.records()) {
    sw += r.weight;
    sw2 += r.weight * r.weight;
  }
  auto& diag = ens.diagnostics();
  diag.effective_samples = sw2 > 0.0 ? sw * sw / sw2 : 0.0;
  diag.ess_warning = diag.effective_samples < ens.config().ess_floor;
}

}  // namespace

WeightedEnsemble enumerate_ensemble(const EnsembleConfig& cfg) {
  validate(cfg);
  const double walks = std::pow(2.0 * cfg.d, static_cast<double>(cfg.n));
  if (walks > std::pow(4.0, 10)) throw ResourceLimit("full ensemble enumeration beyond 4^10 walks");
  WeightedEnsemble ens(cfg);
  const auto base = static_cast<std::uint32_t>(2 * cfg.d);
  std::vector<Direction> steps(cfg.n, 0);
  for (;;) {
    const auto path = LatticePath::from_steps(cfg.d, steps);
    const auto trace = path.sites();
    auto rec = summarise(trace, cfg.beta);
    if (rec.weight > 0.0 && in_window(cfg, rec.j)) {
      if (cfg.retain_paths) {
        ens.add(rec, path);
      } else {
        ens.add(rec);
      }
    } else {
      ++ens.diagnostics().window_rejections;
    }
    // Odometer increment over base-2d digits.
    std::size_t i = 0;
    while (i < steps.size() && ++steps[i] == base) steps[i++] = 0;
    if (i == steps.size()) break;
  }
  finish_weighted(ens);
  return ens;
}

WeightedEnsemble sample_reweighted(const EnsembleConfig& cfg) {
  validate(cfg);
  WeightedEnsemble ens(cfg);
  Rng rng(cfg.seed);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    auto path = sample_srw(cfg.n, cfg.d, rng);
    const auto trace = path.sites();
    const auto rec = summarise(trace, cfg.beta);
    if (rec.weight <= 0.0 || !in_window(cfg, rec.j)) {
      ++ens.diagnostics().window_rejections;
      continue;
    }
    if (cfg.retain_paths) {
      ens.add(rec, std::move(path));
    } else {
      ens.add(rec);
    }
  }
  ens.diagnostics().proposals = cfg.samples;
  finish_weighted(ens);
  return ens;
}

namespace {

std::vector<double> series(const WeightedEnsemble& ens, Observable obs) {
  std::vector<double> out;
  out.reserve(ens.size());
  for (const auto& r : ens.records()) out.push_back(observe(r, obs));
  return out;
}

}  // namespace

WeightedEnsemble sample_mcmc(const EnsembleConfig& cfg) {
  validate(cfg);
  if (cfg.n < 4) throw InvalidArgument("MCMC sampler needs n >= 4");
  if (cfg.mcmc.thinning == 0) throw InvalidArgument("thinning interval must be positive");

  ChainSettings settings;
  settings.n = cfg.n;
  settings.d = cfg.d;
  settings.beta = cfg.beta;
  settings.window = cfg.window;
  settings.pivot_fraction = cfg.mcmc.pivot_fraction;
  settings.init_attempts = cfg.mcmc.init_attempts;
  PivotChain chain(settings, Rng(cfg.seed));

  const std::size_t burn_in = cfg.mcmc.burn_in_sweeps * cfg.n;
  for (std::size_t i = 0; i < burn_in; ++i) chain.step();

  WeightedEnsemble ens(cfg);
  auto record = [&](std::size_t count) {
    for (std::size_t s = 0; s < count; ++s) {
      for (std::size_t t = 0; t < cfg.mcmc.thinning; ++t) chain.step();
      EnsembleRecord rec;
      rec.j = chain.silt();
      rec.chi = chain.endpoint_distance();
      rec.radius = chain.radius();
      rec.weight = 1.0;
      if (cfg.retain_paths) {
        ens.add(rec, chain.path());
      } else {
        ens.add(rec);
      }
    }
  };
  record(cfg.samples);

  auto& diag = ens.diagnostics();
  auto refresh = [&] {
    if (ens.size() < 2) return;
    diag.chi_autocorr = integrated_autocorr_time(series(ens, Observable::chi));
    diag.chi2_autocorr = integrated_autocorr_time(series(ens, Observable::chi2));
    diag.effective_samples =
        std::min(diag.chi_autocorr.effective_samples, diag.chi2_autocorr.effective_samples);
  };
  refresh();
  for (std::size_t ext = 0; ext < cfg.mcmc.max_extension && cfg.mcmc.min_effective_samples > 0.0 &&
                            diag.effective_samples < cfg.mcmc.min_effective_samples;
       ++ext) {
    // Grow toward the target using the current tau estimate, at most doubling.
    const double need = cfg.mcmc.min_effective_samples / std::max(diag.effective_samples, 1.0);
    const auto extra = static_cast<std::size_t>(
        std::ceil(static_cast<double>(ens.size()) * std::min(1.0, 1.1 * need - 1.0)));
    record(std::max<std::size_t>(extra, 1));
    refresh();
  }

  const auto& c = chain.counters();
  diag.proposals = c.proposals;
  diag.acceptance_rate = c.proposals ? static_cast<double>(c.accepted) / c.proposals : 1.0;
  diag.pivot_acceptance = c.pivot_proposals ? static_cast<double>(c.pivot_accepted) / c.pivot_proposals : 1.0;
  diag.local_acceptance = c.local_proposals ? static_cast<double>(c.local_accepted) / c.local_proposals : 1.0;
  diag.window_rejections = c.window_rejections;
  diag.ess_warning = cfg.mcmc.min_effective_samples > 0.0 && diag.effective_samples < cfg.mcmc.min_effective_samples;
  return ens;
}

std::vector<WeightedEnsemble> sample_mcmc_chains(const EnsembleConfig& cfg, std::size_t chains, unsigned threads) {
  std::vector<std::optional<WeightedEnsemble>> slots(chains);
  detail::parallel_for(chains, threads, [&](std::size_t i) {
    EnsembleConfig local = cfg;
    local.seed.stream = cfg.seed.stream + static_cast<std::uint32_t>(i);
    slots[i].emplace(sample_mcmc(local));
  });
  std::vector<WeightedEnsemble> out;
  out.reserve(chains);
  for (std::size_t i = 0; i < chains; ++i) {
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

WeightedEnsemble sample(const EnsembleConfig& cfg) {
  switch (cfg.sampler) {
    case SamplerKind::exact:
      return enumerate_ensemble(cfg);
    case SamplerKind::reweight:
      return sample_reweighted(cfg);
    case SamplerKind::mcmc:
      return sample_mcmc(cfg);
  }
  throw InvalidArgument("unknown sampler");
}

// --- estimation --------------------------------------------------------------

double observe(const EnsembleRecord& rec, Observable obs) {
  switch (obs) {
    case Observable::chi:
      return rec.chi;
    case Observable::chi2:
      return rec.chi * rec.chi;
    case Observable::silt:
      return static_cast<double>(rec.j);
    case Observable::radius:
      return rec.radius;
  }
  return 0.0;
}

Estimate estimate_mean(const WeightedEnsemble& ens, Observable obs) {
  if (ens.size() == 0) throw DegenerateInput("empty ensemble");
  Estimate out;
  if (ens.config().sampler == SamplerKind::mcmc) {
    if (ens.size() < 2) throw DegenerateInput("need at least two chain samples");
    const auto ce = chain_estimate(series(ens, obs));
    out.mean = ce.mean;
    out.se = ce.se;
    out.tau_int = ce.tau_int;
    out.effective_samples = ce.effective_samples;
    return out;
  }
  detail::CompensatedSum sw;
  detail::CompensatedSum swx;
  for (const auto& r : ens.records()) {
    sw.add(r.weight);
    swx.add(r.weight * observe(r, obs));
  }
  out.mean = swx.value() / sw.value();
  double var = 0.0;
  double sw2 = 0.0;
  for (const auto& r : ens.records()) {
    const double dev = observe(r, obs) - out.mean;
    var += r.weight * r.weight * dev * dev;
    sw2 += r.weight * r.weight;
  }
  const double total = sw.value();
  out.effective_samples = total * total / sw2;
  // Full enumeration is exact; sampling error only exists for draws.
  out.se = ens.config().sampler == SamplerKind::exact ? 0.0 : std::sqrt(var) / total;
  return out;
}

Estimate pool(std::span<const Estimate> parts) {
  if (parts.empty()) throw DegenerateInput("nothing to pool");
  Estimate out;
  double wsum = 0.0;
  double mean = 0.0;
  out.tau_int = 0.0;
  bool any_zero = false;
  for (const auto& p : parts) any_zero = any_zero || p.se <= 0.0;
  for (const auto& p : parts) {
    const double w = any_zero ? 1.0 : 1.0 / (p.se * p.se);
    wsum += w;
    mean += w * p.mean;
    out.effective_samples += p.effective_samples;
    out.tau_int += p.tau_int;
  }
  out.mean = mean / wsum;
  out.se = any_zero ? 0.0 : std::sqrt(1.0 / wsum);
  out.tau_int = out.tau_int / static_cast<double>(parts.size());
  return out;
}

}  // namespace latwalk
