#pragma once

#include <string>

#include <json.hpp>

#include "nlch/config.hpp"
#include "nlch/verify.hpp"

namespace nlch {

// Provenance block embedded in every report: config hash, seed lineage and the
// discretization the numbers were produced under.
nlohmann::json provenance(const RunConfig& rc);

nlohmann::json to_json(const KqReport& rep);
nlohmann::json to_json(const EnergyLedger& led);
nlohmann::json to_json(const MomentReport& rep);
nlohmann::json to_json(const WeakReport& rep);
nlohmann::json to_json(const StrongReport& rep, const std::vector<std::string>& battery_names);
nlohmann::json to_json(const GronwallReport& rep);

// Flat aligned key/value rendering of a report for terminal output.
std::string render_text(const nlohmann::json& j);

void write_report(const nlohmann::json& j, const std::string& file);

} // namespace nlch
