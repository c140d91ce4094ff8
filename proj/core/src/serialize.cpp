#include "pathpref/serialize.hpp"

#include <cstdio>

#include "pathpref/errors.hpp"

namespace pathpref {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string_view to_string(PriorKind kind) {
  return kind == PriorKind::Uniform ? "uniform" : "support";
}

PriorKind prior_from_string(std::string_view name) {
  if (name == "uniform") return PriorKind::Uniform;
  if (name == "support") return PriorKind::SupportProportional;
  throw InputError("unknown prior '" + std::string(name) + "'");
}

json path_to_json(const PathRecord& path) {
  return {{"edges", path.edges}, {"violations", path.violations}, {"time", path.time}};
}

json region_set_to_json(const RegionSet& regions) {
  json out;
  out["sample_count"] = regions.info().sample_count;
  out["seed"] = regions.info().seed;
  out["lower"] = std::vector<double>(regions.info().lower.begin(), regions.info().lower.end());
  out["upper"] = std::vector<double>(regions.info().upper.begin(), regions.info().upper.end());
  json list = json::array();
  for (const auto& r : regions) {
    const auto& w = r.representative_weight();
    list.push_back({{"id", r.id},
                    {"path", path_to_json(r.canonical_path)},
                    {"support_count", r.support_count()},
                    {"representative_weight", std::vector<double>(w.begin(), w.end())}});
  }
  out["regions"] = std::move(list);
  return out;
}

json posterior_snapshot(const PosteriorState& state) {
  json out = json::array();
  for (std::size_t r = 0; r < state.size(); ++r) {
    out.push_back({{"region", r},
                   {"probability", state.probability(r)},
                   {"q", state.measure(r)},
                   {"canonical_path_id", r}});
  }
  return out;
}

json config_to_json(const SessionConfig& c) {
  json out{{"selector", std::string(to_string(c.selector))},
           {"assumed_accuracy", c.assumed_accuracy},
           {"budget", c.budget},
           {"prior", std::string(to_string(c.prior))},
           {"sample_count", c.sample_count},
           {"mvr_beta", c.mvr_beta},
           {"accuracy_hook", static_cast<bool>(c.accuracy_hook)}};
  out["stop_threshold"] = c.stop_threshold ? json(*c.stop_threshold) : json(nullptr);
  return out;
}

json observation_to_json(const Observation& o) {
  return {{"path_i", o.path_i},
          {"path_j", o.path_j},
          {"choice", o.choice == Choice::I ? "i" : "j"},
          {"assumed_accuracy", o.assumed_accuracy},
          {"iteration", o.iteration}};
}

Observation observation_from_json(const json& doc) {
  try {
    Observation o;
    o.path_i = doc.at("path_i").get<int>();
    o.path_j = doc.at("path_j").get<int>();
    const std::string c = doc.at("choice").get<std::string>();
    if (c != "i" && c != "j") throw SchemaError("observation choice must be 'i' or 'j'");
    o.choice = c == "i" ? Choice::I : Choice::J;
    o.assumed_accuracy = doc.at("assumed_accuracy").get<double>();
    o.iteration = doc.at("iteration").get<int>();
    return o;
  } catch (const json::exception& err) {
    throw SchemaError(std::string("malformed observation: ") + err.what());
  }
}

json session_result_to_json(const SessionResult& r) {
  json out;
  out["seed"] = r.seed;
  out["config"] = config_to_json(r.config);
  out["region_count"] = r.region_count;
  out["stop_reason"] = std::string(to_string(r.stop));
  out["converged_by_vacuity"] = r.converged_by_vacuity;
  out["executed_iterations"] = r.executed();
  out["best_region"] = r.best.region;
  out["best_weight"] = std::vector<double>(r.best.weight.begin(), r.best.weight.end());
  out["true_region"] = r.true_region ? json(*r.true_region) : json(nullptr);
  out["iterations_to_0.5"] = r.iterations_to_half ? json(*r.iterations_to_half) : json(nullptr);
  out["iterations_to_0.9"] =
      r.iterations_to_ninety ? json(*r.iterations_to_ninety) : json(nullptr);
  out["true_trajectory"] = r.true_trajectory;
  out["current_regions"] = r.current_regions;
  out["trajectory"] = r.trajectory;
  json log = json::array();
  for (const auto& o : r.log) log.push_back(observation_to_json(o));
  out["observations"] = std::move(log);
  out["final_posterior"] = r.final_posterior;
  return out;
}

void write_trajectory_csv(std::ostream& out, const SessionResult& r, bool header) {
  if (header) out << "seed,iteration,region_id,posterior,is_true_region,current_path_id\n";
  for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
    for (std::size_t k = 0; k < r.trajectory[n].size(); ++k) {
      const bool truth = r.true_region && static_cast<std::size_t>(*r.true_region) == k;
      out << r.seed << ',' << n << ',' << k << ',' << format_number(r.trajectory[n][k]) << ','
          << (truth ? 1 : 0) << ',' << r.current_regions[n] << '\n';
    }
  }
}

}  // namespace pathpref
