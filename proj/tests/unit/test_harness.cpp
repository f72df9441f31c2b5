#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "latwalk/census.hpp"
#include "latwalk/csv.hpp"
#include "latwalk/error.hpp"
#include "latwalk/harness.hpp"

using namespace latwalk;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("latwalk-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    REQUIRE(!line.empty());
    REQUIRE(line.back() == '\r');
    line.pop_back();
    std::vector<std::string> cells;
    boost::split(cells, line, boost::is_any_of(","));
    rows.push_back(cells);
  }
  return rows;
}

ExperimentSpec spec_for(StudyKind kind, const fs::path& out) {
  auto s = default_spec(kind);
  s.out_dir = out.string();
  return s;
}

WeightedEnsemble hull_ensemble(std::vector<std::pair<double, double>> chi_r) {
  EnsembleConfig c;
  c.n = 100;
  c.beta = 0.0;
  c.sampler = SamplerKind::reweight;
  WeightedEnsemble ens(c);
  for (const auto& [chi, r] : chi_r) ens.add({0, chi, r, 1.0});
  return ens;
}

}  // namespace

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  std::ostringstream out;
  CsvWriter w(out);
  w.header({"name", "x", "ok", "k"});
  w.row(std::string("a,b"), 0.1, true, std::size_t{7});
  CHECK(out.str() == "name,x,ok,k\r\n\"a,b\",0.1,true,7\r\n");
}

TEST_CASE("study names round-trip") {
  for (auto k : {StudyKind::census, StudyKind::exact_small_n, StudyKind::srw_baseline, StudyKind::weaksaw_exponent,
                 StudyKind::saw_exponent, StudyKind::shape_study, StudyKind::condition_d, StudyKind::convex_hull,
                 StudyKind::palm_poisson, StudyKind::nu_table}) {
    CHECK(study_from_string(to_string(k)) == k);
  }
  CHECK(to_string(StudyKind::exact_small_n) == "exact-small-n");
  CHECK_THROWS_AS(study_from_string("nonsense"), InvalidArgument);
}

TEST_CASE("config file with overrides") {
  const auto dir = scratch_dir("config");
  fs::create_directories(dir);
  const auto ini = dir / "run.ini";
  std::ofstream(ini) << "[study]\nkind = exact-small-n\nn = 4, 6\nbeta = 0.5, inf\nseed = 9\nout = "
                     << (dir / "out").string() << "\n[sampler]\nsamples = 123\n[prop21]\nb_factor = 3\n";
  const auto tree = load_config(ini, {{"study.seed", "11"}, {"sampler.thinning", "4"}});
  const auto s = parse_spec(tree);
  CHECK(s.kind == StudyKind::exact_small_n);
  CHECK(s.n_grid == std::vector<std::size_t>{4, 6});
  REQUIRE(s.betas.size() == 2);
  CHECK(std::isinf(s.betas[1]));
  CHECK(s.seed == 11);
  CHECK(s.sampler.samples == 123);
  CHECK(s.sampler.mcmc.thinning == 4);
  CHECK(s.param("prop21.b_factor", 2.0) == 3.0);
  CHECK(s.param("prop21.missing", 2.5) == 2.5);

  // The effective config reparses to the same spec.
  const auto again = parse_spec(to_tree(s));
  CHECK(again.n_grid == s.n_grid);
  CHECK(again.seed == s.seed);
  CHECK(again.param("prop21.b_factor", 0.0) == 3.0);

  CHECK_THROWS_AS(load_config(ini, {{"nosection", "1"}}), InvalidArgument);
  CHECK_THROWS_AS(parse_spec(load_config(ini, {{"study.n", ""}})), InvalidArgument);
  CHECK_THROWS_AS(parse_spec(load_config(ini, {{"study.beta", "-1"}})), InvalidArgument);
}

TEST_CASE("output root from the environment") {
  const auto dir = scratch_dir("env");
  ::setenv(kOutputEnv, dir.string().c_str(), 1);
  boost::property_tree::ptree tree;
  tree.put("study.kind", "nu-table");
  CHECK(fs::path(parse_spec(tree).out_dir) == dir / "nu-table");
  ::unsetenv(kOutputEnv);
  CHECK(fs::path(parse_spec(tree).out_dir) == fs::path("latwalk-out") / "nu-table");
}

TEST_CASE("nu table study") {
  const auto dir = scratch_dir("nu");
  const auto m = run_experiment(spec_for(StudyKind::nu_table, dir));
  CHECK(m.exit_code() == 0);
  const auto rows = csv_rows(dir / "nu.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"d", "nu", "value"});
  CHECK(rows[1][0] == "1");
  CHECK(rows[1][1] == "1");
  CHECK(rows[2][1] == "3/4");
  CHECK(rows[3][1] == "7/12");
  CHECK(rows[4][1] == "1/2");
  CHECK(std::stod(rows[3][2]) == 7.0 / 12);
}

TEST_CASE("census study matches the census module") {
  const auto dir = scratch_dir("census");
  auto s = spec_for(StudyKind::census, dir);
  s.n_grid = {10};
  const auto m = run_experiment(s);
  CHECK(m.exit_code() == 0);
  const auto table = enumerate_saw(10, 2);
  const auto rows = csv_rows(dir / "census.csv");
  REQUIRE(rows.size() == 11);
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(std::stoull(rows[n][0]) == n);
    CHECK(rows[n][1] == table.at(n).str());
    CHECK(rows[n][3] == "true");
  }
}

TEST_CASE("rerunning a manifest reproduces every artifact byte for byte") {
  for (auto kind : {StudyKind::exact_small_n, StudyKind::srw_baseline, StudyKind::shape_study}) {
    CAPTURE(to_string(kind));
    const auto dir = scratch_dir("rerun-" + to_string(kind));
    auto s = spec_for(kind, dir);
    if (kind == StudyKind::exact_small_n) s.n_grid = {4, 6};
    if (kind == StudyKind::srw_baseline) {
      s.n_grid = {64, 128, 256};
      s.sampler.samples = 500;
    }
    if (kind == StudyKind::shape_study) {
      s.n_grid = {32};
      s.betas = {1.0};
      s.sampler.samples = 20;
      s.sampler.chains = 2;
    }
    s.threads = 2;
    const auto first = run_experiment(s);
    REQUIRE(first.complete);
    REQUIRE(!first.artifacts.empty());

    auto again_spec = spec_from_manifest(first, (dir / "rerun").string());
    again_spec.threads = 1;
    const auto second = run_experiment(again_spec);
    CHECK(second.spec_hash == first.spec_hash);
    REQUIRE(second.artifacts.size() == first.artifacts.size());
    for (std::size_t i = 0; i < first.artifacts.size(); ++i) {
      CHECK(second.artifacts[i].path == first.artifacts[i].path);
      CHECK(slurp(dir / first.artifacts[i].path) == slurp(dir / "rerun" / second.artifacts[i].path));
    }
    CHECK(verify_artifacts(dir).empty());
  }
}

TEST_CASE("manifest round-trip and tamper detection") {
  const auto dir = scratch_dir("manifest");
  const auto m = run_experiment(spec_for(StudyKind::nu_table, dir));
  const auto back = RunManifest::from_json(nlohmann::json::parse(slurp(dir / "manifest.json")));
  CHECK(back.to_json() == m.to_json());
  CHECK(back.tool_version == kToolVersion);
  std::ofstream(dir / "nu.csv", std::ios::app) << "extra\r\n";
  CHECK(verify_artifacts(dir) == std::vector<std::string>{"nu.csv"});
  CHECK_THROWS_AS(RunManifest::from_json(nlohmann::json::object()), FormatError);
}

TEST_CASE("spec hash ignores threads and output location") {
  auto a = spec_for(StudyKind::nu_table, scratch_dir("hash-a"));
  auto b = spec_for(StudyKind::nu_table, scratch_dir("hash-b"));
  b.threads = 3;
  CHECK(run_experiment(a).spec_hash == run_experiment(b).spec_hash);
  b.seed = 2;
  CHECK(run_experiment(a).spec_hash != run_experiment(b).spec_hash);
}

TEST_CASE("exit codes") {
  RunManifest m;
  m.complete = true;
  CHECK(m.exit_code() == 0);
  m.predicates.push_back({"a", true, ""});
  CHECK(m.exit_code() == 0);
  m.predicates.push_back({"b", false, ""});
  CHECK(m.exit_code() == 2);
  m.complete = false;
  CHECK(m.exit_code() == 1);
}

TEST_CASE("exact study refuses sizes beyond the enumeration budget") {
  const auto dir = scratch_dir("budget");
  auto s = spec_for(StudyKind::exact_small_n, dir);
  s.n_grid = {default_walk_budget(2) + 1};
  CHECK_THROWS_AS(run_experiment(s), ResourceLimit);
  const auto m = RunManifest::from_json(nlohmann::json::parse(slurp(dir / "manifest.json")));
  CHECK(!m.complete);
  CHECK(m.exit_code() == 1);
  CHECK(!m.error.empty());
}

TEST_CASE("convex hull report") {
  SUBCASE("straight paths") {
    std::vector<std::pair<double, double>> recs;
    for (int i = 0; i < 200; ++i) recs.push_back({100.0, 100.0});
    for (int i = 0; i < 200; ++i) recs.push_back({40.0 + i % 50, 40.0 + i % 50});
    const auto rep = report_convex_hull(hull_ensemble(recs));
    REQUIRE(!rep.rows.empty());
    for (const auto& row : rep.rows) CHECK(row.ratio == 1.0);
    CHECK(rep.pathwise_ok);
    CHECK(rep.lower_ok);
    CHECK(rep.upper_ok);
  }
  SUBCASE("dominance gives ratios of at least one") {
    Rng rng(SeededSource{61, 0});
    std::vector<std::pair<double, double>> recs;
    for (int i = 0; i < 5000; ++i) {
      const double chi = 30 * rng.uniform();
      recs.push_back({chi, chi + 10 * rng.uniform()});
    }
    const auto rep = report_convex_hull(hull_ensemble(recs));
    for (const auto& row : rep.rows) CHECK(row.ratio >= 1.0);
    CHECK(rep.lower_ok);
  }
  SUBCASE("pathwise violation is caught") {
    const auto rep = report_convex_hull(hull_ensemble({{5.0, 4.0}, {3.0, 3.0}}));
    CHECK(!rep.pathwise_ok);
  }
  SUBCASE("sparse tails raise the coverage warning") {
    const auto rep = report_convex_hull(hull_ensemble({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}));
    CHECK(rep.coverage_warning);
  }
}
