#include "pathpref/scenario.hpp"

#include "pathpref/errors.hpp"

namespace pathpref {

std::string default_color(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Avoid:
      return "red";
    case ConstraintKind::SpeedLimit:
      return "yellow";
    case ConstraintKind::RoadAgainst:
    case ConstraintKind::RoadFollow:
      return "green";
    case ConstraintKind::Generic:
      break;
  }
  return "gray";
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.graph == b.graph && a.constraints == b.constraints &&
         a.tasks == b.tasks && a.render == b.render;
}

void validate_scenario(const Scenario& scenario) {
  const ValidationReport report = validate_graph(scenario.graph);
  if (!report.ok()) {
    std::string msg = "invalid graph:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw InputError(msg);
  }
  if (scenario.tasks.empty()) throw InputError("scenario has no tasks");
  for (const auto& task : scenario.tasks) validate_task(scenario.graph, task);
  if (scenario.constraints.num_edges() != scenario.graph.num_edges()) {
    throw InputError("constraint set was built for a different graph");
  }
  scenario.constraints.check_nonnegative_costs(scenario.graph);
}

}  // namespace pathpref
