#include "latwalk/ensemble_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "latwalk/error.hpp"
#include "latwalk/path_codec.hpp"

namespace latwalk {

namespace {

nlohmann::json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw FormatError("not a number: " + s);
  }
  return j.get<double>();
}

nlohmann::json to_json(const AutocorrEstimate& a) {
  return {{"tau_int", a.tau_int},
          {"window", a.window},
          {"window_ok", a.window_ok},
          {"effective_samples", a.effective_samples}};
}

AutocorrEstimate autocorr_from_json(const nlohmann::json& j) {
  AutocorrEstimate a;
  a.tau_int = j.at("tau_int").get<double>();
  a.window = j.at("window").get<std::size_t>();
  a.window_ok = j.at("window_ok").get<bool>();
  a.effective_samples = j.at("effective_samples").get<double>();
  return a;
}

nlohmann::json to_json(const SamplerDiagnostics& d) {
  return {{"proposals", d.proposals},
          {"acceptance_rate", d.acceptance_rate},
          {"pivot_acceptance", d.pivot_acceptance},
          {"local_acceptance", d.local_acceptance},
          {"window_rejections", d.window_rejections},
          {"chi_autocorr", to_json(d.chi_autocorr)},
          {"chi2_autocorr", to_json(d.chi2_autocorr)},
          {"effective_samples", d.effective_samples},
          {"ess_warning", d.ess_warning}};
}

SamplerDiagnostics diagnostics_from_json(const nlohmann::json& j) {
  SamplerDiagnostics d;
  d.proposals = j.at("proposals").get<std::uint64_t>();
  d.acceptance_rate = j.at("acceptance_rate").get<double>();
  d.pivot_acceptance = j.at("pivot_acceptance").get<double>();
  d.local_acceptance = j.at("local_acceptance").get<double>();
  d.window_rejections = j.at("window_rejections").get<std::uint64_t>();
  d.chi_autocorr = autocorr_from_json(j.at("chi_autocorr"));
  d.chi2_autocorr = autocorr_from_json(j.at("chi2_autocorr"));
  d.effective_samples = j.at("effective_samples").get<double>();
  d.ess_warning = j.at("ess_warning").get<bool>();
  return d;
}

double parse_double(std::string_view field) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw FormatError("bad number '" + std::string(field) + "'");
  }
  return x;
}

std::uint64_t parse_uint(std::string_view field) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw FormatError("bad integer '" + std::string(field) + "'");
  }
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

nlohmann::json to_json(const EnsembleConfig& cfg) {
  nlohmann::json j = {
      {"n", cfg.n},
      {"d", cfg.d},
      {"beta", number_or_inf(cfg.beta)},
      {"samples", cfg.samples},
      {"sampler", to_string(cfg.sampler)},
      {"seed", cfg.seed.seed},
      {"stream", cfg.seed.stream},
      {"retain_paths", cfg.retain_paths},
      {"ess_floor", cfg.ess_floor},
      {"mcmc",
       {{"burn_in_sweeps", cfg.mcmc.burn_in_sweeps},
        {"thinning", cfg.mcmc.thinning},
        {"pivot_fraction", cfg.mcmc.pivot_fraction},
        {"init_attempts", cfg.mcmc.init_attempts},
        {"min_effective_samples", cfg.mcmc.min_effective_samples},
        {"max_extension", cfg.mcmc.max_extension}}},
  };
  j["window"] = cfg.window ? nlohmann::json{{"b1", cfg.window->b1}, {"b2", cfg.window->b2}} : nlohmann::json();
  return j;
}

EnsembleConfig config_from_json(const nlohmann::json& j) {
  try {
    EnsembleConfig cfg;
    cfg.n = j.at("n").get<std::size_t>();
    cfg.d = j.at("d").get<int>();
    cfg.beta = read_number(j.at("beta"));
    cfg.samples = j.at("samples").get<std::size_t>();
    cfg.sampler = sampler_from_string(j.at("sampler").get<std::string>());
    cfg.seed.seed = j.at("seed").get<std::uint64_t>();
    cfg.seed.stream = j.at("stream").get<std::uint32_t>();
    cfg.retain_paths = j.at("retain_paths").get<bool>();
    cfg.ess_floor = j.at("ess_floor").get<double>();
    const auto& m = j.at("mcmc");
    cfg.mcmc.burn_in_sweeps = m.at("burn_in_sweeps").get<std::size_t>();
    cfg.mcmc.thinning = m.at("thinning").get<std::size_t>();
    cfg.mcmc.pivot_fraction = m.at("pivot_fraction").get<double>();
    cfg.mcmc.init_attempts = m.at("init_attempts").get<std::size_t>();
    cfg.mcmc.min_effective_samples = m.at("min_effective_samples").get<double>();
    cfg.mcmc.max_extension = m.at("max_extension").get<std::size_t>();
    if (const auto& w = j.at("window"); !w.is_null()) {
      cfg.window = Window{w.at("b1").get<double>(), w.at("b2").get<double>()};
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("ensemble config: ") + e.what());
  }
}

void write_ensemble(std::ostream& out, const WeightedEnsemble& ens) {
  const bool paths = !ens.paths().empty();
  const nlohmann::json header = {{"config", to_json(ens.config())},
                                 {"diagnostics", to_json(ens.diagnostics())},
                                 {"records", ens.size()},
                                 {"paths", paths}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto& r = ens.records()[i];
    out << r.j << ',' << format_double(r.chi) << ',' << format_double(r.radius) << ','
        << format_double(r.weight);
    if (paths) out << ',' << encode_path_record(ens.paths()[i]);
    out << '\n';
  }
}

WeightedEnsemble read_ensemble(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing ensemble header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("ensemble header: ") + e.what());
  }
  WeightedEnsemble ens(config_from_json(header.at("config")));
  const auto count = header.at("records").get<std::size_t>();
  const bool paths = header.at("paths").get<bool>();

  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw FormatError("ensemble truncated at record " + std::to_string(i));
    std::string_view rest(line);
    std::string_view fields[5];
    std::size_t nf = 0;
    while (nf < 5) {
      const auto comma = nf == 4 ? std::string_view::npos : rest.find(',');
      fields[nf++] = rest.substr(0, comma);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (nf != (paths ? 5u : 4u)) throw FormatError("record " + std::to_string(i) + " has wrong field count");
    EnsembleRecord r;
    r.j = parse_uint(fields[0]);
    r.chi = parse_double(fields[1]);
    r.radius = parse_double(fields[2]);
    r.weight = parse_double(fields[3]);
    if (paths) {
      ens.add(r, decode_path_record(fields[4]));
    } else {
      ens.add(r);
    }
  }
  ens.diagnostics() = diagnostics_from_json(header.at("diagnostics"));
  return ens;
}

}  // namespace latwalk
