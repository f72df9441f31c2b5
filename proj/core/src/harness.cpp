#include "latwalk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "latwalk/asymptotics.hpp"
#include "latwalk/ensemble_io.hpp"
#include "latwalk/error.hpp"

namespace latwalk {

namespace pt = boost::property_tree;

namespace {

constexpr std::pair<StudyKind, const char*> kStudyNames[] = {
    {StudyKind::census, "census"},
    {StudyKind::exact_small_n, "exact-small-n"},
    {StudyKind::srw_baseline, "srw-baseline"},
    {StudyKind::weaksaw_exponent, "weaksaw-exponent"},
    {StudyKind::saw_exponent, "saw-exponent"},
    {StudyKind::shape_study, "shape-study"},
    {StudyKind::condition_d, "condition-d"},
    {StudyKind::convex_hull, "convex-hull"},
    {StudyKind::palm_poisson, "palm-poisson"},
    {StudyKind::nu_table, "nu-table"},
};

double parse_real(const std::string& text) {
  const auto t = boost::algorithm::trim_copy(text);
  if (t == "inf" || t == "infinity" || t == "saw") return kSelfAvoiding;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + t + "'");
  }
  if (used != t.size()) throw InvalidArgument("not a number: '" + t + "'");
  return v;
}

std::uint64_t parse_count(const std::string& text) {
  const auto t = boost::algorithm::trim_copy(text);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!t.empty() && t[0] == '-') throw InvalidArgument("negative count");
    v = std::stoull(t, &used);
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("not a count: '" + t + "'");
  } catch (const std::out_of_range&) {
    throw InvalidArgument("count out of range: '" + t + "'");
  }
  if (used != t.size()) throw InvalidArgument("not a count: '" + t + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::string join_reals(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::isinf(xs[i]) ? std::string("inf") : format_double(xs[i]);
  }
  return out;
}

std::string join_counts(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

bool parse_bool(const std::string& text) {
  const auto t = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InvalidArgument("not a boolean: '" + text + "'");
}

bool needs_grid(StudyKind kind) { return kind != StudyKind::palm_poisson && kind != StudyKind::nu_table; }

}  // namespace

std::string to_string(StudyKind kind) {
  for (const auto& [k, name] : kStudyNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StudyKind study_from_string(const std::string& name) {
  for (const auto& [k, n] : kStudyNames) {
    if (name == n) return k;
  }
  throw InvalidArgument("unknown study kind '" + name + "'");
}

double ExperimentSpec::param(const std::string& key, double fallback) const {
  const auto v = params.get_optional<std::string>(key);
  return v ? parse_real(*v) : fallback;
}

std::string ExperimentSpec::param(const std::string& key, const std::string& fallback) const {
  return params.get<std::string>(key, fallback);
}

std::vector<double> ExperimentSpec::param_list(const std::string& key, std::vector<double> fallback) const {
  const auto v = params.get_optional<std::string>(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& p : split_list(*v)) out.push_back(parse_real(p));
  return out;
}

ExperimentSpec default_spec(StudyKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  auto& m = s.sampler;
  switch (kind) {
    case StudyKind::census:
      s.n_grid = {14};
      break;
    case StudyKind::exact_small_n:
      s.n_grid = {6, 8, 10};
      s.betas = {0.5, 1.0, 2.0};
      break;
    case StudyKind::srw_baseline:
      s.n_grid = {256, 512, 1024, 2048, 4096};
      s.betas = {0.0};
      m.kind = SamplerKind::reweight;
      m.samples = 10000;
      break;
    case StudyKind::weaksaw_exponent:
      s.n_grid = {33, 65, 129, 257, 513, 1025};
      s.betas = {1.0};
      m.target_ess = 20000;
      break;
    case StudyKind::saw_exponent:
      s.n_grid = {33, 65, 129, 257, 513, 1025};
      s.betas = {kSelfAvoiding};
      m.target_ess = 20000;
      break;
    case StudyKind::shape_study:
      s.n_grid = {64, 128, 256};
      s.betas = {0.5, 1.0, 2.0};
      m.samples = 250;
      m.chains = 4;
      m.mcmc.thinning = 20;
      break;
    case StudyKind::condition_d:
      s.n_grid = {64, 128, 256, 512};
      s.betas = {1.0};
      m.samples = 1000;
      m.chains = 4;
      m.mcmc.thinning = 10;
      break;
    case StudyKind::convex_hull:
      s.n_grid = {1024};
      s.betas = {0.0};
      m.kind = SamplerKind::reweight;
      m.samples = 100000;
      break;
    case StudyKind::palm_poisson:
    case StudyKind::nu_table:
      break;
  }
  return s;
}

ExperimentSpec parse_spec(const pt::ptree& tree) {
  const auto kind = tree.get_optional<std::string>("study.kind");
  if (!kind) throw InvalidArgument("configuration lacks [study] kind");
  return parse_spec(tree, study_from_string(boost::algorithm::trim_copy(*kind)));
}

ExperimentSpec parse_spec(const pt::ptree& tree, StudyKind fallback_kind) {
  const auto kind_name = tree.get_optional<std::string>("study.kind");
  ExperimentSpec s = default_spec(kind_name ? study_from_string(boost::algorithm::trim_copy(*kind_name)) : fallback_kind);

  if (const auto v = tree.get_optional<std::string>("study.n")) {
    s.n_grid.clear();
    for (const auto& p : split_list(*v)) s.n_grid.push_back(parse_count(p));
  }
  if (const auto v = tree.get_optional<std::string>("study.beta")) {
    s.betas.clear();
    for (const auto& p : split_list(*v)) s.betas.push_back(parse_real(p));
  }
  if (const auto v = tree.get_optional<std::string>("study.d")) s.d = static_cast<int>(parse_count(*v));
  if (const auto v = tree.get_optional<std::string>("study.seed")) s.seed = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("study.threads")) s.threads = static_cast<unsigned>(parse_count(*v));
  if (const auto v = tree.get_optional<std::string>("study.out")) s.out_dir = boost::algorithm::trim_copy(*v);

  auto& m = s.sampler;
  if (const auto v = tree.get_optional<std::string>("sampler.kind")) m.kind = sampler_from_string(boost::algorithm::trim_copy(*v));
  if (const auto v = tree.get_optional<std::string>("sampler.samples")) m.samples = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.chains")) m.chains = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.target_ess")) m.target_ess = parse_real(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.burn_in_sweeps")) m.mcmc.burn_in_sweeps = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.thinning")) m.mcmc.thinning = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.pivot_fraction")) m.mcmc.pivot_fraction = parse_real(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.init_attempts")) m.mcmc.init_attempts = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.max_extension")) m.mcmc.max_extension = parse_count(*v);
  if (const auto v = tree.get_optional<std::string>("sampler.save")) m.save_ensembles = parse_bool(*v);

  for (const auto& [section, body] : tree) {
    if (section == "study" || section == "sampler") continue;
    s.params.put_child(section, body);
  }
  if (s.out_dir.empty()) {
    const char* root = std::getenv(kOutputEnv);
    s.out_dir = (std::filesystem::path(root && *root ? root : "latwalk-out") / to_string(s.kind)).string();
  }
  validate(s);
  return s;
}

pt::ptree load_config(const std::filesystem::path& ini,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  pt::ptree tree;
  if (!ini.empty()) {
    try {
      pt::read_ini(ini.string(), tree);
    } catch (const pt::ini_parser_error& e) {
      throw FormatError(e.what());
    }
  }
  for (const auto& [key, value] : overrides) {
    if (key.find('.') == std::string::npos) throw InvalidArgument("override key needs a section: '" + key + "'");
    tree.put(key, value);
  }
  return tree;
}

pt::ptree to_tree(const ExperimentSpec& s) {
  pt::ptree t;
  t.put("study.kind", to_string(s.kind));
  t.put("study.n", join_counts(s.n_grid));
  t.put("study.beta", join_reals(s.betas));
  t.put("study.d", s.d);
  t.put("study.seed", s.seed);
  t.put("study.threads", s.threads);
  t.put("study.out", s.out_dir);
  t.put("sampler.kind", to_string(s.sampler.kind));
  t.put("sampler.samples", s.sampler.samples);
  t.put("sampler.chains", s.sampler.chains);
  t.put("sampler.target_ess", format_double(s.sampler.target_ess));
  t.put("sampler.burn_in_sweeps", s.sampler.mcmc.burn_in_sweeps);
  t.put("sampler.thinning", s.sampler.mcmc.thinning);
  t.put("sampler.pivot_fraction", format_double(s.sampler.mcmc.pivot_fraction));
  t.put("sampler.init_attempts", s.sampler.mcmc.init_attempts);
  t.put("sampler.max_extension", s.sampler.mcmc.max_extension);
  t.put("sampler.save", s.sampler.save_ensembles ? "true" : "false");
  for (const auto& [section, body] : s.params) t.put_child(section, body);
  return t;
}

void validate(const ExperimentSpec& s) {
  if (needs_grid(s.kind) && s.n_grid.empty()) throw InvalidArgument("study grid of n values is empty");
  if (s.d < 1 || s.d > kMaxDimension) throw InvalidArgument("dimension out of range");
  for (double b : s.betas) {
    if (!(b >= 0.0)) throw InvalidArgument("beta values must be >= 0");
  }
  if (s.sampler.chains == 0) throw InvalidArgument("sampler needs at least one chain");
  if (s.sampler.samples == 0) throw InvalidArgument("sampler needs at least one sample");
  if (s.threads == 0) throw InvalidArgument("threads must be >= 1");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int RunManifest::exit_code() const {
  if (!complete) return 1;
  for (const auto& p : predicates) {
    if (!p.passed) return 2;
  }
  return 0;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool_version"] = tool_version;
  j["study"] = study;
  j["spec_hash"] = spec_hash;
  j["config"] = config;
  j["complete"] = complete;
  j["error"] = error;
  j["tasks"] = nlohmann::json::array();
  for (const auto& t : tasks) j["tasks"].push_back({{"task", t.task}, {"seed", t.seed}, {"stream", t.stream}});
  j["artifacts"] = nlohmann::json::array();
  for (const auto& a : artifacts) j["artifacts"].push_back({{"path", a.path}, {"fnv1a", a.fnv1a}, {"bytes", a.bytes}});
  j["predicates"] = nlohmann::json::array();
  for (const auto& p : predicates) {
    j["predicates"].push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
  }
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.study = j.at("study").get<std::string>();
    m.spec_hash = j.at("spec_hash").get<std::string>();
    m.config = j.at("config");
    m.complete = j.at("complete").get<bool>();
    m.error = j.at("error").get<std::string>();
    for (const auto& t : j.at("tasks")) {
      m.tasks.push_back({t.at("task").get<std::string>(), t.at("seed").get<std::uint64_t>(),
                         t.at("stream").get<std::uint32_t>()});
    }
    for (const auto& a : j.at("artifacts")) {
      m.artifacts.push_back({a.at("path").get<std::string>(), a.at("fnv1a").get<std::string>(),
                             a.at("bytes").get<std::uintmax_t>()});
    }
    for (const auto& p : j.at("predicates")) {
      m.predicates.push_back({p.at("name").get<std::string>(), p.at("passed").get<bool>(),
                              p.at("detail").get<std::string>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

namespace {

nlohmann::json tree_to_json(const pt::ptree& tree) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, child] : tree) {
    if (child.empty()) {
      j[key] = child.data();
    } else {
      j[key] = tree_to_json(child);
    }
  }
  return j;
}

std::string spec_hash(const ExperimentSpec& spec) {
  // Threads and output location do not change any artifact.
  auto tree = to_tree(spec);
  tree.get_child("study").erase("threads");
  tree.get_child("study").erase("out");
  std::ostringstream ini;
  pt::write_ini(ini, tree);
  return fnv1a_hex(ini.str());
}

void write_manifest(const ExperimentSpec& spec, const RunManifest& m) {
  std::ofstream out(std::filesystem::path(spec.out_dir) / "manifest.json", std::ios::binary);
  out << m.to_json().dump(2) << '\n';
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunManifest run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory " + spec.out_dir + ": " + ec.message());

  RunManifest m;
  m.study = to_string(spec.kind);
  m.spec_hash = spec_hash(spec);
  m.config = tree_to_json(to_tree(spec));
  try {
    switch (spec.kind) {
      case StudyKind::census: studies::census(spec, m); break;
      case StudyKind::exact_small_n: studies::exact_small_n(spec, m); break;
      case StudyKind::srw_baseline: studies::srw_baseline(spec, m); break;
      case StudyKind::weaksaw_exponent:
      case StudyKind::saw_exponent: studies::exponent(spec, m); break;
      case StudyKind::shape_study: studies::shape_study(spec, m); break;
      case StudyKind::condition_d: studies::condition_d(spec, m); break;
      case StudyKind::convex_hull: studies::convex_hull(spec, m); break;
      case StudyKind::palm_poisson: studies::palm_poisson(spec, m); break;
      case StudyKind::nu_table: studies::nu_table(spec, m); break;
    }
    m.complete = true;
  } catch (const std::exception& e) {
    m.complete = false;
    m.error = e.what();
    write_manifest(spec, m);
    throw;
  }
  write_manifest(spec, m);
  return m;
}

ExperimentSpec spec_from_manifest(const RunManifest& manifest, const std::string& out_dir) {
  pt::ptree tree;
  auto fill = [&](auto&& self, const nlohmann::json& j, const std::string& prefix) -> void {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object()) {
        self(self, *it, key);
      } else {
        tree.put(key, it->get<std::string>());
      }
    }
  };
  fill(fill, manifest.config, "");
  tree.put("study.out", out_dir);
  return parse_spec(tree);
}

std::vector<std::string> verify_artifacts(const std::filesystem::path& dir) {
  const auto manifest = RunManifest::from_json(nlohmann::json::parse(read_file(dir / "manifest.json")));
  std::vector<std::string> differing;
  for (const auto& a : manifest.artifacts) {
    const auto p = dir / a.path;
    if (!std::filesystem::exists(p) || fnv1a_hex(read_file(p)) != a.fnv1a) differing.push_back(a.path);
  }
  return differing;
}

void studies::write_artifact(const ExperimentSpec& spec, RunManifest& manifest, const std::string& name,
                             const std::string& text) {
  const auto path = std::filesystem::path(spec.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
  out.close();
  manifest.artifacts.push_back({name, fnv1a_hex(text), text.size()});
}

HullReport report_convex_hull(const WeightedEnsemble& ens, double slack, std::size_t grid_points) {
  if (ens.size() == 0) throw DegenerateInput("empty ensemble");
  if (grid_points == 0) throw InvalidArgument("grid needs at least one point");
  const auto& recs = ens.records();
  HullReport rep;
  rep.slack = slack;

  std::vector<std::size_t> order(recs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return recs[a].chi < recs[b].chi; });
  double total = 0.0;
  for (const auto& r : recs) {
    total += r.weight;
    if (r.radius < r.chi) rep.pathwise_ok = false;
  }
  double cum = 0.0;
  for (auto i : order) {
    cum += recs[i].weight;
    if (cum >= 0.99 * total) {
      rep.quantile99 = recs[i].chi;
      break;
    }
  }

  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  const auto n = ens.config().n;
  for (std::size_t k = 1; k <= grid_points; ++k) {
    const double x = rep.quantile99 * static_cast<double>(k) / static_cast<double>(grid_points);
    // Plain sums in record order: a superset of nonnegative terms never sums lower.
    double tr = 0.0;
    double tc = 0.0;
    std::size_t in_tail = 0;
    for (const auto& r : recs) {
      if (r.radius >= x) tr += r.weight;
      if (r.chi >= x) {
        tc += r.weight;
        ++in_tail;
      }
    }
    if (in_tail < 10) rep.coverage_warning = true;
    if (tc == 0.0) continue;
    HullRow row{x, tr / total, tc / total, tr / tc, n ? gaussian_tail_reference(n, x) : 1.0};
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    if (row.ratio < 1.0) rep.lower_ok = false;
    if (row.ratio > 2.0 * (1.0 + slack)) rep.upper_ok = false;
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) rep.min_ratio = 0.0;
  return rep;
}

}  // namespace latwalk
