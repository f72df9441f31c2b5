#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "latwalk/ensemble.hpp"

namespace latwalk {

inline constexpr const char* kToolVersion = "latwalk 0.3.0";
/// Default output root when no --out / [study] out is given.
inline constexpr const char* kOutputEnv = "LATWALK_OUT";

enum class StudyKind {
  census,
  exact_small_n,
  srw_baseline,
  weaksaw_exponent,
  saw_exponent,
  shape_study,
  condition_d,
  convex_hull,
  palm_poisson,
  nu_table,
};

std::string to_string(StudyKind kind);
StudyKind study_from_string(const std::string& name);

struct SamplerSettings {
  SamplerKind kind = SamplerKind::mcmc;
  /// Records per chain (MCMC) or draws (reweighting).
  std::size_t samples = 20000;
  std::size_t chains = 4;
  /// Pooled effective-sample target; split evenly over chains.
  double target_ess = 0.0;
  McmcParams mcmc{};
  bool save_ensembles = false;
};

/// One experiment. Study-specific knobs live in `params` under their INI section
/// names ("shape.a1", "palm.points", ...); typed fields cover the shared ones.
struct ExperimentSpec {
  StudyKind kind = StudyKind::nu_table;
  std::vector<std::size_t> n_grid;
  std::vector<double> betas;
  int d = 2;
  SamplerSettings sampler{};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir;
  boost::property_tree::ptree params;

  double param(const std::string& key, double fallback) const;
  std::string param(const std::string& key, const std::string& fallback) const;
  std::vector<double> param_list(const std::string& key, std::vector<double> fallback) const;
};

/// Acceptance-sized defaults for a study kind.
ExperimentSpec default_spec(StudyKind kind);

/// Reads [study] and [sampler] into typed fields on top of default_spec(kind);
/// every other section is kept in params. Lists are comma-separated.
ExperimentSpec parse_spec(const boost::property_tree::ptree& tree);
ExperimentSpec parse_spec(const boost::property_tree::ptree& tree, StudyKind fallback_kind);
/// INI file plus "section.key=value" overrides; overrides win.
boost::property_tree::ptree load_config(const std::filesystem::path& ini,
                                        const std::vector<std::pair<std::string, std::string>>& overrides);
/// Effective configuration, as it would be written to an INI file.
boost::property_tree::ptree to_tree(const ExperimentSpec& spec);
void validate(const ExperimentSpec& spec);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct TaskSeed {
  std::string task;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

struct Artifact {
  std::string path;
  std::string fnv1a;
  std::uintmax_t bytes = 0;
};

struct PredicateResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string study;
  std::string spec_hash;
  nlohmann::json config;
  std::vector<TaskSeed> tasks;
  std::vector<Artifact> artifacts;
  std::vector<PredicateResult> predicates;
  bool complete = false;
  std::string error;

  /// 0 when every predicate passed, 2 otherwise; incomplete runs are 1.
  int exit_code() const;
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

/// Runs the study, writing CSV/JSON artifacts and manifest.json into
/// spec.out_dir. On failure the manifest is still written (complete = false)
/// and the error is rethrown.
RunManifest run_experiment(const ExperimentSpec& spec);

/// The experiment recorded in a manifest, retargeted to `out_dir`.
ExperimentSpec spec_from_manifest(const RunManifest& manifest, const std::string& out_dir);

/// Re-hashes every artifact listed in `dir`/manifest.json; returns the paths that differ.
std::vector<std::string> verify_artifacts(const std::filesystem::path& dir);

struct HullRow {
  double x = 0.0;
  double tail_radius = 0.0;
  double tail_chi = 0.0;
  double ratio = 0.0;
  double gaussian = 0.0;
};

struct HullReport {
  std::vector<HullRow> rows;
  double slack = 0.1;
  /// Weighted 99th percentile of chi_n; the grid ends there.
  double quantile99 = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// Pathwise R_n >= chi_n on every record.
  bool pathwise_ok = true;
  bool lower_ok = true;
  bool upper_ok = true;
  /// Set when some grid point has fewer than 10 records in the chi tail.
  bool coverage_warning = false;
};

/// Tails P(R_n >= x) and P(chi_n >= x) on `grid_points` equally spaced x in (0, q99].
HullReport report_convex_hull(const WeightedEnsemble& ens, double slack = 0.1, std::size_t grid_points = 64);

// Study bodies; each appends artifacts, tasks and predicates to `manifest`.
namespace studies {
void census(const ExperimentSpec& spec, RunManifest& manifest);
void exact_small_n(const ExperimentSpec& spec, RunManifest& manifest);
void srw_baseline(const ExperimentSpec& spec, RunManifest& manifest);
void exponent(const ExperimentSpec& spec, RunManifest& manifest);
void shape_study(const ExperimentSpec& spec, RunManifest& manifest);
void condition_d(const ExperimentSpec& spec, RunManifest& manifest);
void convex_hull(const ExperimentSpec& spec, RunManifest& manifest);
void palm_poisson(const ExperimentSpec& spec, RunManifest& manifest);
void nu_table(const ExperimentSpec& spec, RunManifest& manifest);

/// Writes `text` to spec.out_dir / name and records it.
void write_artifact(const ExperimentSpec& spec, RunManifest& manifest, const std::string& name,
                    const std::string& text);
}  // namespace studies

}  // namespace latwalk
