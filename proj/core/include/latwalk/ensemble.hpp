#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latwalk/autocorr.hpp"
#include "latwalk/census.hpp"
#include "latwalk/lattice_walk.hpp"
#include "latwalk/radial_law.hpp"
#include "latwalk/rng.hpp"

namespace latwalk {

/// Penalty value selecting the strictly self-avoiding limit.
inline constexpr double kSelfAvoiding = std::numeric_limits<double>::infinity();

enum class SamplerKind { exact, reweight, mcmc };

std::string to_string(SamplerKind kind);
SamplerKind sampler_from_string(const std::string& name);

/// Per-step SILT window: keep paths with J_n in [b1 n, b2 n].
struct Window {
  double b1 = 0.0;
  double b2 = 0.0;
};

/// b2 = c / beta (so beta * b2 = c does not depend on beta), b1 = b2 / ratio.
Window default_window(double beta, double c = std::log(4.0), double ratio = 20.0);

struct McmcParams {
  /// One sweep is n proposals.
  std::size_t burn_in_sweeps = 10;
  /// Proposals between recorded samples.
  std::size_t thinning = 1;
  /// Probability that a proposal is a pivot rather than a local move.
  double pivot_fraction = 0.8;
  std::size_t init_attempts = 10000;
  /// When positive, keep extending the chain until both chi and chi^2 reach this
  /// many effective samples (or max_extension doublings have been spent).
  double min_effective_samples = 0.0;
  std::size_t max_extension = 6;
};

struct EnsembleConfig {
  std::size_t n = 0;
  int d = 2;
  /// beta >= 0; kSelfAvoiding selects the SAW limit.
  double beta = 1.0;
  std::size_t samples = 1000;
  std::optional<Window> window;
  SamplerKind sampler = SamplerKind::reweight;
  SeededSource seed{};
  McmcParams mcmc{};
  bool retain_paths = false;
  /// Reweighting: flag the ensemble when the effective sample size drops below this.
  double ess_floor = 100.0;
};

void validate(const EnsembleConfig& cfg);

struct EnsembleRecord {
  std::uint64_t j = 0;
  double chi = 0.0;
  double radius = 0.0;
  double weight = 1.0;
};

struct SamplerDiagnostics {
  std::uint64_t proposals = 0;
  double acceptance_rate = 1.0;
  double pivot_acceptance = 1.0;
  double local_acceptance = 1.0;
  /// Draws/proposals discarded because J_n left the window.
  std::uint64_t window_rejections = 0;
  AutocorrEstimate chi_autocorr{};
  AutocorrEstimate chi2_autocorr{};
  /// Reweighting: (sum w)^2 / sum w^2. MCMC: min over chi and chi^2 of N / (2 tau_int).
  double effective_samples = 0.0;
  bool ess_warning = false;
};

/// Sampled paths (or their summaries) with penalization weights.
class WeightedEnsemble {
 public:
  explicit WeightedEnsemble(EnsembleConfig config) : config_(std::move(config)) {}

  const EnsembleConfig& config() const { return config_; }
  const std::vector<EnsembleRecord>& records() const { return records_; }
  /// Empty unless paths were retained; otherwise parallel to records().
  const std::vector<LatticePath>& paths() const { return paths_; }
  bool has_paths() const { return !paths_.empty() || records_.empty(); }
  std::size_t size() const { return records_.size(); }
  double total_weight() const { return total_weight_ + compensation_; }

  SamplerDiagnostics& diagnostics() { return diagnostics_; }
  const SamplerDiagnostics& diagnostics() const { return diagnostics_; }

  /// Records must carry positive weight.
  void add(const EnsembleRecord& record);
  void add(const EnsembleRecord& record, LatticePath path);

 private:
  EnsembleConfig config_;
  std::vector<EnsembleRecord> records_;
  std::vector<LatticePath> paths_;
  double total_weight_ = 0.0;
  double compensation_ = 0.0;
  SamplerDiagnostics diagnostics_{};
};

struct ExactExpectations {
  /// E_0 exp(-beta J_n)
  double partition = 0.0;
  double mean_chi = 0.0;
  double mean_chi2 = 0.0;
};

/// Exact sums over all (2d)^n walks. Throws ResourceLimit beyond the walk budget.
ExactExpectations exact_expectations(std::size_t n, int d, double beta, const CensusOptions& options = {});
ExactExpectations exact_expectations(const WalkCensus& census, double beta);

/// Every walk of length n as a record weighted by exp(-beta J_n); only for (2d)^n <= 4^10.
WeightedEnsemble enumerate_ensemble(const EnsembleConfig& cfg);

/// SRW draws weighted by exp(-beta J_n); walks outside the window are dropped.
WeightedEnsemble sample_reweighted(const EnsembleConfig& cfg);

/// Metropolis chain on n-step walks targeting exp(-beta J_n): pivot moves (random
/// lattice symmetry applied to the suffix after a random site) mixed with local
/// corner/end moves. Samples carry weight 1.
WeightedEnsemble sample_mcmc(const EnsembleConfig& cfg);

/// Independent chains on streams cfg.seed.stream + i, returned in stream order.
std::vector<WeightedEnsemble> sample_mcmc_chains(const EnsembleConfig& cfg, std::size_t chains,
                                                 unsigned threads = 1);

/// Dispatches on cfg.sampler.
WeightedEnsemble sample(const EnsembleConfig& cfg);

enum class Observable { chi, chi2, silt, radius };

double observe(const EnsembleRecord& rec, Observable obs);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  double tau_int = 0.5;
  double effective_samples = 0.0;
};

/// Weighted mean with its standard error: autocorrelation-corrected for MCMC
/// ensembles, delta-method ratio variance for weighted ones.
Estimate estimate_mean(const WeightedEnsemble& ens, Observable obs);

/// Combines equal-standing estimates of one quantity (e.g. several chains) by
/// inverse-variance weighting.
Estimate pool(std::span<const Estimate> parts);

/// Throws DegenerateInput when the ensemble has no weight.
RadialLaw distance_law(const WeightedEnsemble& ens, BinSpec bins);

}  // namespace latwalk
