#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latwalk/error.hpp"
#include "latwalk/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string seed;
  std::string threads;
  std::string out;
  std::string n;
  std::string beta;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool grid) {
  cmd->add_option("--config", f.config, "INI configuration file");
  cmd->add_option("--seed", f.seed, "master seed (default 1)");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--out", f.out, "output directory (default $LATWALK_OUT/<study>)");
  cmd->add_option("--set", f.set, "override any configuration key, e.g. --set shape.rho=0.3");
  if (grid) {
    cmd->add_option("--n", f.n, "comma-separated walk lengths");
    cmd->add_option("--beta", f.beta, "comma-separated penalties ('inf' for strict self-avoidance)");
  }
}

int run_study(const CommonFlags& f, const std::string& kind, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::vector<std::pair<std::string, std::string>> overrides = {{"study.kind", kind}};
  if (!f.seed.empty()) overrides.emplace_back("study.seed", f.seed);
  if (!f.threads.empty()) overrides.emplace_back("study.threads", f.threads);
  if (!f.out.empty()) overrides.emplace_back("study.out", f.out);
  if (!f.n.empty()) overrides.emplace_back("study.n", f.n);
  if (!f.beta.empty()) overrides.emplace_back("study.beta", f.beta);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw latwalk::InvalidArgument("--set expects key=value, got '" + kv + "'");
    overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  overrides.insert(overrides.end(), extra.begin(), extra.end());

  const auto spec = latwalk::parse_spec(latwalk::load_config(f.config, overrides));
  const auto manifest = latwalk::run_experiment(spec);
  for (const auto& p : manifest.predicates) {
    std::cout << (p.passed ? "PASS " : "FAIL ") << p.name << ": " << p.detail << '\n';
  }
  std::cout << manifest.artifacts.size() << " artifacts in " << spec.out_dir << '\n';
  return manifest.exit_code();
}

int report(const std::string& dir, bool rerun) {
  std::ifstream in(std::filesystem::path(dir) / "manifest.json");
  if (!in) throw latwalk::FormatError("no manifest.json in " + dir);
  const auto manifest = latwalk::RunManifest::from_json(nlohmann::json::parse(in));
  std::cout << manifest.study << " (" << manifest.tool_version << ", spec " << manifest.spec_hash << ")"
            << (manifest.complete ? "" : " INCOMPLETE: " + manifest.error) << '\n';
  for (const auto& p : manifest.predicates) {
    std::cout << (p.passed ? "PASS " : "FAIL ") << p.name << ": " << p.detail << '\n';
  }
  const auto changed = latwalk::verify_artifacts(dir);
  for (const auto& a : changed) std::cout << "MODIFIED " << a << '\n';
  int code = changed.empty() ? manifest.exit_code() : 1;

  if (rerun) {
    const auto rerun_dir = (std::filesystem::path(dir) / "rerun").string();
    const auto again = latwalk::run_experiment(latwalk::spec_from_manifest(manifest, rerun_dir));
    std::map<std::string, std::string> before;
    for (const auto& a : manifest.artifacts) before[a.path] = a.fnv1a;
    std::size_t same = 0;
    for (const auto& a : again.artifacts) {
      if (before.count(a.path) && before[a.path] == a.fnv1a) {
        ++same;
      } else {
        std::cout << "DIFFERS " << a.path << '\n';
        code = 1;
      }
    }
    std::cout << "rerun: " << same << "/" << manifest.artifacts.size() << " artifacts byte-identical\n";
    if (same != manifest.artifacts.size()) code = 1;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly self-avoiding walk laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", latwalk::kToolVersion);

  struct Command {
    const char* name;
    const char* kind;
    const char* help;
    bool grid;
  };
  const Command commands[] = {
      {"census", "census", "exact self-avoiding walk counts (grid max is n_max)", true},
      {"exact", "exact-small-n", "exact weighted expectations by full enumeration", true},
      {"sample", "srw-baseline", "sample ensembles; beta = 0 rows are checked against the random-walk baseline", true},
      {"exponent", "weaksaw-exponent", "pivot-chain exponent estimation", true},
      {"shapes", "shape-study", "cone decompositions and shape detection", true},
      {"condition-d", "condition-d", "a_x tables, integrals, condition D and bound panels", true},
      {"hull", "convex-hull", "hull radius versus endpoint distance tails", true},
      {"palm", "palm-poisson", "Palm estimators on Poisson samples", false},
      {"nu", "nu-table", "closed-form distance exponents by dimension", false},
  };
  std::map<std::string, CommonFlags> flags;
  std::map<std::string, CLI::App*> subs;
  bool saw = false;
  bool save = false;
  for (const auto& c : commands) {
    auto* cmd = app.add_subcommand(c.name, c.help);
    add_common(cmd, flags[c.name], c.grid);
    subs[c.name] = cmd;
  }
  subs["exponent"]->add_flag("--saw", saw, "strict self-avoiding walks (beta = inf)");
  subs["sample"]->add_flag("--save", save, "write every ensemble to disk");

  std::string report_dir;
  bool rerun = false;
  auto* rep = app.add_subcommand("report", "summarize a run directory and check its artifacts");
  rep->add_option("dir", report_dir, "run directory holding manifest.json")->required();
  rep->add_flag("--rerun", rerun, "re-execute the recorded configuration and compare bytes");

  CLI11_PARSE(app, argc, argv);
  try {
    if (rep->parsed()) return report(report_dir, rerun);
    for (const auto& c : commands) {
      if (!subs[c.name]->parsed()) continue;
      std::vector<std::pair<std::string, std::string>> extra;
      std::string kind = c.kind;
      if (std::string(c.name) == "exponent" && saw) {
        kind = "saw-exponent";
        if (flags[c.name].beta.empty()) extra.emplace_back("study.beta", "inf");
      }
      if (save) extra.emplace_back("sampler.save", "true");
      return run_study(flags[c.name], kind, extra);
    }
  } catch (const std::exception& e) {
    std::cerr << "latwalk: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
