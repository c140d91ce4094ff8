#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "pathpref/bayes.hpp"
#include "pathpref/regions.hpp"
#include "pathpref/session.hpp"

namespace pathpref {

/// printf "%.12g"; the fixed text form used by every CSV writer.
std::string format_number(double v);

std::string_view to_string(PriorKind kind);
PriorKind prior_from_string(std::string_view name);

nlohmann::json path_to_json(const PathRecord& path);
nlohmann::json region_set_to_json(const RegionSet& regions);

/// One entry per region: region id, probability, q and canonical path id.
/// Canonical path ids coincide with region ids.
nlohmann::json posterior_snapshot(const PosteriorState& state);

nlohmann::json config_to_json(const SessionConfig& config);
nlohmann::json observation_to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& doc);
nlohmann::json session_result_to_json(const SessionResult& result);

/// Long format, one row per (iteration, region):
/// seed,iteration,region_id,posterior,is_true_region,current_path_id
void write_trajectory_csv(std::ostream& out, const SessionResult& result, bool header = true);

}  // namespace pathpref
