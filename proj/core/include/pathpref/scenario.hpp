#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathpref/geometry.hpp"
#include "pathpref/graph.hpp"

namespace pathpref {

/// Drawing hints for one constraint. Roads carry a unit direction.
struct ConstraintShape {
  int constraint_id = -1;
  ConstraintKind kind = ConstraintKind::Generic;
  Polygon polygon;
  std::string color;
  std::optional<Point2> direction;

  bool operator==(const ConstraintShape&) const = default;
};

std::string default_color(ConstraintKind kind);

struct RenderInfo {
  std::string layout = "none";  // "grid", "prm" or "none"
  double cell_size = 1.0;
  int width = 0;   // grid cells, grid layout only
  int height = 0;
  std::vector<Polygon> obstacles;
  std::vector<ConstraintShape> constraints;

  bool operator==(const RenderInfo&) const = default;
};

struct Scenario {
  std::string name;
  EnvironmentGraph graph;
  ConstraintSet constraints;
  std::vector<TaskSpec> tasks;
  RenderInfo render;
};

bool operator==(const Scenario& a, const Scenario& b);

/// Graph, task and nonnegativity checks. Throws InputError or ConfigError.
void validate_scenario(const Scenario& scenario);

}  // namespace pathpref
