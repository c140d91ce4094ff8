#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pathpref/scenario.hpp"

namespace pathpref {

inline constexpr int kScenarioSchemaVersion = 1;

nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws SchemaError naming the offending key path, e.g. "/edges/3/tail".
Scenario scenario_from_json(const nlohmann::json& doc);

/// Throws SchemaError with the byte offset on malformed text.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& scenario);

}  // namespace pathpref
