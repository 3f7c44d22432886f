// JSON scenario files. Boundary units are degrees, g and seconds; the
// in-memory ScenarioConfig is SI with radians.

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "zemtwist/sim.hpp"

namespace zemtwist::cli {

/// Defaults are filled for every missing key. Unknown keys and type errors
/// throw ConfigError naming the offending path; invariant violations throw
/// ConfigError listing each field.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig parse_scenario_file(const std::filesystem::path& path);

/// Every field materialized. parse_scenario(emit_scenario(c)) == c for any c
/// returned by parse_scenario (angles converted from degrees lose nothing).
nlohmann::json emit_scenario(const ScenarioConfig& config);

}  // namespace zemtwist::cli
