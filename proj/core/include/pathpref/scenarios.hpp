#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathpref/geometry.hpp"
#include "pathpref/scenario.hpp"

namespace pathpref {

// ---- grid layouts ----------------------------------------------------------

struct Cell {
  int x = 0;
  int y = 0;

  bool operator==(const Cell&) const = default;
};

/// Inclusive cell rectangle.
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool contains(Cell c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
  bool operator==(const CellRect&) const = default;
};

enum class ZoneKind { Avoid, SpeedLimit, Road };

struct ZoneSpec {
  ZoneKind kind = ZoneKind::Avoid;
  CellRect area;
  double weight_lo = 0.0;
  double weight_hi = 1.0;
  std::optional<double> true_weight;
  // Roads only. direction is one of (1,0), (-1,0), (0,1), (0,-1).
  Cell direction{1, 0};
  double follow_lo = -0.5;
  double follow_hi = 0.0;
  std::optional<double> follow_true_weight;
};

struct GridScenarioConfig {
  std::string name = "grid";
  int width = 0;
  int height = 0;
  double fast_time = 1.0;
  double slow_time = 2.0;
  std::vector<CellRect> obstacles;
  std::vector<ZoneSpec> zones;
  std::vector<std::pair<Cell, Cell>> tasks;
};

struct GridBuild {
  Scenario scenario;
  std::int64_t constrained_cells = 0;
  std::int64_t free_cells = 0;

  double coverage() const {
    return free_cells == 0 ? 0.0
                           : static_cast<double>(constrained_cells) /
                                 static_cast<double>(free_cells);
  }
};

/// Vertex ids follow free cells in row-major order. Each free cell emits its
/// outgoing moves in the order +x, -x, +y, -y, fast edge before slow edge.
/// Roads compile to two constraints: road_against then road_follow.
/// Throws InputError on a bad config and ConfigError on disconnected free
/// space or negative combined costs.
GridBuild build_grid_scenario(const GridScenarioConfig& cfg);

/// Vertex id of a free cell, or -1.
VertexId grid_vertex(const GridScenarioConfig& cfg, Cell c);

struct GridPresetTarget {
  std::string name;
  int constraints = 0;
  double coverage = 0.0;
};

/// "spec-A", "spec-B" and "spec-C".
const std::vector<GridPresetTarget>& grid_preset_targets();

/// Random 24x24 layout with the preset's constraint count and coverage
/// within 0.03 of its target. Deterministic for a given seed.
GridBuild build_grid_preset(std::string_view name, std::uint64_t seed = 1);

/// Same generator with an explicit target, for custom presets.
GridBuild build_random_grid(const GridPresetTarget& target, int width, int height,
                            std::uint64_t seed);

// ---- probabilistic roadmaps ------------------------------------------------

struct PrmScenarioConfig {
  std::string name = "prm";
  double width = 100.0;  // meters
  double height = 100.0;
  std::vector<Polygon> obstacles;
  std::size_t vertex_count = 400;
  std::size_t neighbors = 10;  // k
  double speed = 1.0;          // m/s
  std::size_t constraint_count = 20;
  double constraint_radius_min = 4.0;
  double constraint_radius_max = 12.0;
  int constraint_polygon_vertices = 7;
  double weight_lo = 0.0;  // seconds per violating edge
  double weight_hi = 30.0;
  std::vector<std::pair<Point2, Point2>> tasks;
  std::uint64_t seed = 1;
};

/// Rectangular buildings scattered over the map, keeping clear disks around
/// the given task points.
std::vector<Polygon> campus_obstacles(double width, double height, std::size_t count,
                                      const std::vector<std::pair<Point2, Point2>>& tasks,
                                      std::uint64_t seed);

/// Campus map with default tasks across opposite corners.
PrmScenarioConfig prm_campus_config(std::size_t vertex_count, std::size_t neighbors,
                                    std::size_t constraint_count, std::uint64_t seed);

/// Vertices are uniform collision-free points, joined to their k nearest
/// visible neighbours in both directions. The largest connected component
/// is kept and renumbered in sampling order. Task points snap to their
/// nearest sampled vertex; ConfigError when that vertex was dropped.
Scenario build_prm_scenario(const PrmScenarioConfig& cfg);

/// Grid preset or "prm-<n>-<k>-<constraints>". seed picks the layout.
Scenario build_named_scenario(std::string_view name, std::uint64_t seed = 1);

}  // namespace pathpref
