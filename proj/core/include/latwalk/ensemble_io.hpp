#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "latwalk/ensemble.hpp"

namespace latwalk {

nlohmann::json to_json(const EnsembleConfig& cfg);
EnsembleConfig config_from_json(const nlohmann::json& j);

/// Header line: canonical JSON {"config", "diagnostics", "records", "paths"}.
/// Then one line per record: J,chi,R,weight[,<path record>].
void write_ensemble(std::ostream& out, const WeightedEnsemble& ens);
WeightedEnsemble read_ensemble(std::istream& in);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace latwalk
