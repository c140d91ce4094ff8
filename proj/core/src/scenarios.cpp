#include "pathpref/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "pathpref/errors.hpp"

namespace pathpref {

namespace {

constexpr Cell kDirections[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

bool in_bounds(const GridScenarioConfig& cfg, const CellRect& r) {
  return r.x0 >= 0 && r.y0 >= 0 && r.x1 < cfg.width && r.y1 < cfg.height && r.x0 <= r.x1 &&
         r.y0 <= r.y1;
}

bool is_free(const GridScenarioConfig& cfg, Cell c) {
  if (c.x < 0 || c.y < 0 || c.x >= cfg.width || c.y >= cfg.height) return false;
  return std::none_of(cfg.obstacles.begin(), cfg.obstacles.end(),
                      [&](const CellRect& r) { return r.contains(c); });
}

Polygon cell_polygon(const CellRect& r) {
  return Rect{double(r.x0), double(r.y0), double(r.x1 + 1), double(r.y1 + 1)}.to_polygon();
}

void check_grid_config(const GridScenarioConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) throw InputError("grid needs positive width and height");
  if (!(cfg.fast_time > 0.0) || !(cfg.slow_time > cfg.fast_time)) {
    throw InputError("need 0 < fast_time < slow_time");
  }
  for (const auto& r : cfg.obstacles) {
    if (!in_bounds(cfg, r)) throw InputError("obstacle rectangle out of bounds");
  }
  for (const auto& z : cfg.zones) {
    if (!in_bounds(cfg, z.area)) throw InputError("zone rectangle out of bounds");
    if (!(z.weight_lo <= z.weight_hi)) throw InputError("zone weight interval is empty");
    if (z.kind == ZoneKind::Road) {
      const bool axis = std::abs(z.direction.x) + std::abs(z.direction.y) == 1;
      if (!axis) throw InputError("road direction must be a unit grid step");
      if (!(z.follow_lo <= z.follow_hi)) throw InputError("road follow interval is empty");
    }
  }
  if (cfg.tasks.empty()) throw InputError("grid scenario needs at least one task");
}

}  // namespace

VertexId grid_vertex(const GridScenarioConfig& cfg, Cell c) {
  if (!is_free(cfg, c)) return -1;
  VertexId id = 0;
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      if (x == c.x && y == c.y) return id;
      if (is_free(cfg, {x, y})) ++id;
    }
  }
  return -1;
}

GridBuild build_grid_scenario(const GridScenarioConfig& cfg) {
  check_grid_config(cfg);

  std::vector<VertexId> ids(static_cast<std::size_t>(cfg.width * cfg.height), -1);
  auto id_of = [&](Cell c) -> VertexId& {
    return ids[static_cast<std::size_t>(c.y * cfg.width + c.x)];
  };
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      if (!is_free(cfg, {x, y})) continue;
      const VertexId id = static_cast<VertexId>(vertices.size());
      id_of({x, y}) = id;
      vertices.push_back({id, double(x), double(y)});
      cells.push_back({x, y});
    }
  }
  if (vertices.empty()) throw ConfigError("grid has no free cells");

  struct Move {
    Cell from, to, dir;
    bool fast;
  };
  std::vector<Edge> edges;
  std::vector<Move> moves;
  for (const Cell& c : cells) {
    for (const Cell& d : kDirections) {
      const Cell n{c.x + d.x, c.y + d.y};
      if (!is_free(cfg, n)) continue;
      for (bool fast : {true, false}) {
        const EdgeId id = static_cast<EdgeId>(edges.size());
        edges.push_back({id, id_of(c), id_of(n), fast ? cfg.fast_time : cfg.slow_time});
        moves.push_back({c, n, d, fast});
      }
    }
  }

  EnvironmentGraph graph(cfg.name, std::move(vertices), std::move(edges));

  std::vector<Constraint> constraints;
  RenderInfo render;
  render.layout = "grid";
  render.width = cfg.width;
  render.height = cfg.height;
  for (const auto& r : cfg.obstacles) render.obstacles.push_back(cell_polygon(r));

  auto add = [&](ConstraintKind kind, std::vector<EdgeId> members, double lo, double hi,
                 std::optional<double> truth, const CellRect& area, std::optional<Point2> dir) {
    const int id = static_cast<int>(constraints.size());
    constraints.push_back({id, kind, std::move(members), lo, hi, truth});
    render.constraints.push_back({id, kind, cell_polygon(area), default_color(kind), dir});
  };

  for (const ZoneSpec& z : cfg.zones) {
    std::vector<EdgeId> first;
    std::vector<EdgeId> second;
    for (std::size_t e = 0; e < moves.size(); ++e) {
      const Move& m = moves[e];
      const bool from_in = z.area.contains(m.from);
      const bool to_in = z.area.contains(m.to);
      switch (z.kind) {
        case ZoneKind::Avoid:
          if (from_in || to_in) first.push_back(static_cast<EdgeId>(e));
          break;
        case ZoneKind::SpeedLimit:
          if (m.fast && (from_in || to_in)) first.push_back(static_cast<EdgeId>(e));
          break;
        case ZoneKind::Road:
          if (!(from_in && to_in)) break;
          if (m.dir.x == -z.direction.x && m.dir.y == -z.direction.y) {
            first.push_back(static_cast<EdgeId>(e));
          } else if (m.dir == z.direction) {
            second.push_back(static_cast<EdgeId>(e));
          }
          break;
      }
    }
    switch (z.kind) {
      case ZoneKind::Avoid:
        add(ConstraintKind::Avoid, std::move(first), z.weight_lo, z.weight_hi, z.true_weight,
            z.area, std::nullopt);
        break;
      case ZoneKind::SpeedLimit:
        add(ConstraintKind::SpeedLimit, std::move(first), z.weight_lo, z.weight_hi,
            z.true_weight, z.area, std::nullopt);
        break;
      case ZoneKind::Road: {
        const Point2 dir{double(z.direction.x), double(z.direction.y)};
        add(ConstraintKind::RoadAgainst, std::move(first), z.weight_lo, z.weight_hi,
            z.true_weight, z.area, dir);
        add(ConstraintKind::RoadFollow, std::move(second), z.follow_lo, z.follow_hi,
            z.follow_true_weight, z.area, dir);
        break;
      }
    }
  }

  std::vector<TaskSpec> tasks;
  for (const auto& [s, g] : cfg.tasks) {
    if (!is_free(cfg, s) || !is_free(cfg, g)) {
      throw InputError("task cell is blocked or out of bounds");
    }
    tasks.push_back({id_of(s), id_of(g)});
  }

  GridBuild out;
  ConstraintSet cs(graph, std::move(constraints));
  out.scenario = Scenario{cfg.name, std::move(graph), std::move(cs), std::move(tasks),
                          std::move(render)};

  const ValidationReport report = validate_graph(out.scenario.graph);
  if (!report.ok()) {
    if (out.scenario.graph.num_edges() == 0 ||
        std::find(report.violations.begin(), report.violations.end(),
                  "not strongly connected") != report.violations.end()) {
      throw ConfigError("free space is disconnected");
    }
    throw ConfigError("invalid grid graph: " + report.violations.front());
  }
  for (const auto& t : out.scenario.tasks) validate_task(out.scenario.graph, t);
  out.scenario.constraints.check_nonnegative_costs(out.scenario.graph);

  for (const Cell& c : cells) {
    ++out.free_cells;
    const bool covered = std::any_of(cfg.zones.begin(), cfg.zones.end(),
                                     [&](const ZoneSpec& z) { return z.area.contains(c); });
    if (covered) ++out.constrained_cells;
  }
  return out;
}

const std::vector<GridPresetTarget>& grid_preset_targets() {
  static const std::vector<GridPresetTarget> targets = {
      {"spec-A", 26, 0.33},
      {"spec-B", 41, 0.40},
      {"spec-C", 52, 0.73},
  };
  return targets;
}

namespace {

constexpr double kCoverageTolerance = 0.03;

// Cheap, stable mixing of a preset name into the layout seed.
std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng);
}

CellRect random_rect(std::mt19937_64& rng, int width, int height, int w, int h) {
  w = std::clamp(w, 1, width);
  h = std::clamp(h, 1, height);
  const int x0 = uniform_int(rng, 0, width - w);
  const int y0 = uniform_int(rng, 0, height - h);
  return {x0, y0, x0 + w - 1, y0 + h - 1};
}

bool touches_corner_margin(const CellRect& r, int width, int height, int margin) {
  const Cell corners[] = {{0, 0}, {width - 1, 0}, {0, height - 1}, {width - 1, height - 1}};
  for (const Cell& c : corners) {
    const int dx = std::max({r.x0 - c.x, 0, c.x - r.x1});
    const int dy = std::max({r.y0 - c.y, 0, c.y - r.y1});
    if (dx < margin && dy < margin) return true;
  }
  return false;
}

}  // namespace

GridBuild build_random_grid(const GridPresetTarget& target, int width, int height,
                            std::uint64_t seed) {
  if (target.constraints < 1) throw InputError("preset needs at least one constraint");
  if (width < 8 || height < 8) throw InputError("random layouts need at least 8x8 cells");
  std::mt19937_64 rng(seed);

  const int roads = static_cast<int>(std::lround(target.constraints / 8.0));
  const int rest = target.constraints - 2 * roads;
  const int avoids = (rest + 1) / 2;
  const int speeds = rest / 2;
  const int zones = roads + avoids + speeds;

  GridScenarioConfig cfg;
  cfg.name = target.name;
  cfg.width = width;
  cfg.height = height;
  cfg.tasks = {{{0, 0}, {width - 1, height - 1}}, {{width - 1, 0}, {0, height - 1}}};

  // A few shelf blocks, away from the task corners.
  while (cfg.obstacles.size() < 4) {
    CellRect r = random_rect(rng, width, height, uniform_int(rng, 1, 3), uniform_int(rng, 3, 6));
    if (!touches_corner_margin(r, width, height, 3)) cfg.obstacles.push_back(r);
  }

  // Side length scale chosen so that disjoint zones would hit the target.
  double scale = std::sqrt(target.coverage * width * height / zones);
  for (int attempt = 0; attempt < 4000; ++attempt) {
    cfg.zones.clear();
    auto side = [&] {
      return uniform_int(rng, std::max(1, int(std::lround(scale * 0.6))),
                         std::max(1, int(std::lround(scale * 1.4))));
    };
    for (int i = 0; i < zones; ++i) {
      ZoneSpec z;
      if (i < roads) {
        z.kind = ZoneKind::Road;
        const bool horizontal = uniform_int(rng, 0, 1) == 0;
        const int length = uniform_int(rng, width / 3, (2 * width) / 3);
        z.area = horizontal ? random_rect(rng, width, height, length, 2)
                            : random_rect(rng, width, height, 2, length);
        const int sign = uniform_int(rng, 0, 1) == 0 ? 1 : -1;
        z.direction = horizontal ? Cell{sign, 0} : Cell{0, sign};
        z.weight_lo = 0.0;
        z.weight_hi = 4.0;
        z.follow_lo = -0.5;
        z.follow_hi = 0.0;
      } else if (i < roads + avoids) {
        z.kind = ZoneKind::Avoid;
        z.area = random_rect(rng, width, height, side(), side());
        z.weight_lo = 0.0;
        z.weight_hi = 4.0;
      } else {
        z.kind = ZoneKind::SpeedLimit;
        z.area = random_rect(rng, width, height, side(), side());
        z.weight_lo = 0.0;
        z.weight_hi = 2.0;
      }
      cfg.zones.push_back(z);
    }
    GridBuild build;
    try {
      build = build_grid_scenario(cfg);
    } catch (const ConfigError&) {
      continue;
    } catch (const InputError&) {
      continue;  // e.g. a zone swallowed by an obstacle has no edges
    }
    const double c = build.coverage();
    if (std::fabs(c - target.coverage) <= kCoverageTolerance) return build;
    const double ratio = c > 0.0 ? target.coverage / c : 2.0;
    scale *= std::clamp(std::sqrt(ratio), 0.8, 1.25);
    scale = std::clamp(scale, 1.0, double(std::max(width, height)));
  }
  throw ConfigError("could not reach the coverage target for " + target.name);
}

GridBuild build_grid_preset(std::string_view name, std::uint64_t seed) {
  for (const auto& t : grid_preset_targets()) {
    if (t.name == name) return build_random_grid(t, 24, 24, name_hash(name) ^ seed);
  }
  throw InputError("unknown preset '" + std::string(name) + "'");
}

// ---- PRM -------------------------------------------------------------------

std::vector<Polygon> campus_obstacles(double width, double height, std::size_t count,
                                      const std::vector<std::pair<Point2, Point2>>& tasks,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> side(6.0, 16.0);
  std::vector<Rect> placed;
  const double gap = 4.0;
  const double clearance = 8.0;
  for (std::size_t attempt = 0; attempt < count * 200 && placed.size() < count; ++attempt) {
    const double w = side(rng);
    const double h = side(rng);
    if (w >= width || h >= height) continue;
    const double x0 = std::uniform_real_distribution<double>(0.0, width - w)(rng);
    const double y0 = std::uniform_real_distribution<double>(0.0, height - h)(rng);
    const Rect r{x0, y0, x0 + w, y0 + h};
    bool ok = true;
    for (const auto& q : placed) {
      if (r.x0 < q.x1 + gap && q.x0 < r.x1 + gap && r.y0 < q.y1 + gap && q.y0 < r.y1 + gap) {
        ok = false;
        break;
      }
    }
    for (const auto& [s, g] : tasks) {
      for (const Point2& p : {s, g}) {
        const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
        const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
        if (std::hypot(dx, dy) < clearance) ok = false;
      }
    }
    if (ok) placed.push_back(r);
  }
  std::vector<Polygon> out;
  for (const auto& r : placed) out.push_back(r.to_polygon());
  return out;
}

PrmScenarioConfig prm_campus_config(std::size_t vertex_count, std::size_t neighbors,
                                    std::size_t constraint_count, std::uint64_t seed) {
  PrmScenarioConfig cfg;
  cfg.name = "prm-" + std::to_string(vertex_count) + "-" + std::to_string(neighbors) + "-" +
             std::to_string(constraint_count);
  cfg.vertex_count = vertex_count;
  cfg.neighbors = neighbors;
  cfg.constraint_count = constraint_count;
  cfg.tasks = {{{3.0, 3.0}, {97.0, 97.0}}, {{97.0, 3.0}, {3.0, 97.0}}};
  cfg.obstacles = campus_obstacles(cfg.width, cfg.height, 12, cfg.tasks, seed ^ 0x5eedca3905ULL);
  cfg.seed = seed;
  return cfg;
}

namespace {

bool blocked(Point2 p, const std::vector<Polygon>& obstacles) {
  return std::any_of(obstacles.begin(), obstacles.end(),
                     [&](const Polygon& poly) { return point_in_polygon(p, poly); });
}

bool visible(Point2 a, Point2 b, const std::vector<Polygon>& obstacles) {
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Polygon& poly) { return segment_hits_polygon(a, b, poly); });
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

Polygon star_polygon(std::mt19937_64& rng, Point2 center, double rmin, double rmax, int corners) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> radius(rmin, rmax);
  std::vector<double> angles(static_cast<std::size_t>(corners));
  for (double& a : angles) a = angle(rng);
  std::sort(angles.begin(), angles.end());
  Polygon poly;
  for (double a : angles) {
    const double r = radius(rng);
    poly.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
  }
  return poly;
}

}  // namespace

Scenario build_prm_scenario(const PrmScenarioConfig& cfg) {
  if (cfg.vertex_count < 2) throw InputError("PRM needs at least two vertices");
  if (cfg.neighbors < 1) throw InputError("PRM needs k >= 1");
  if (!(cfg.speed > 0.0)) throw InputError("robot speed must be positive");
  if (!(cfg.width > 0.0 && cfg.height > 0.0)) throw InputError("map size must be positive");
  if (!(cfg.weight_lo <= cfg.weight_hi)) throw InputError("constraint weight interval is empty");
  if (cfg.weight_lo < 0.0) throw InputError("PRM constraint weights must be nonnegative");
  if (cfg.constraint_polygon_vertices < 3) throw InputError("constraint polygons need 3 corners");
  if (!(0.0 < cfg.constraint_radius_min && cfg.constraint_radius_min <= cfg.constraint_radius_max)) {
    throw InputError("constraint radius range is invalid");
  }
  if (cfg.tasks.empty()) throw InputError("PRM scenario needs at least one task");
  for (const auto& poly : cfg.obstacles) {
    if (!is_simple(poly)) throw InputError("obstacle polygon is not simple");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ux(0.0, cfg.width);
  std::uniform_real_distribution<double> uy(0.0, cfg.height);

  std::vector<Point2> points;
  const std::size_t max_attempts = 1000 * cfg.vertex_count;
  for (std::size_t attempt = 0; points.size() < cfg.vertex_count; ++attempt) {
    if (attempt >= max_attempts) throw ConfigError("free space is empty or too small");
    const Point2 p{ux(rng), uy(rng)};
    if (!blocked(p, cfg.obstacles)) points.push_back(p);
  }

  const std::size_t n = points.size();
  std::set<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = distance(points[i], points[j]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return d[a] != d[b] ? d[a] < d[b] : a < b;
    });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (taken == cfg.neighbors) break;
      if (j == i || d[j] == 0.0) continue;
      if (!visible(points[i], points[j], cfg.obstacles)) continue;
      links.insert({std::min(i, j), std::max(i, j)});
      ++taken;
    }
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (auto [a, b] : links) parent[find_root(parent, a)] = find_root(parent, b);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[find_root(parent, i)];
  std::size_t best_root = find_root(parent, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find_root(parent, i);
    if (size[r] > size[best_root]) best_root = r;
  }

  std::vector<VertexId> remap(n, -1);
  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < n; ++i) {
    if (find_root(parent, i) != best_root) continue;
    remap[i] = static_cast<VertexId>(vertices.size());
    vertices.push_back({remap[i], points[i].x, points[i].y});
  }
  std::vector<Edge> edges;
  for (auto [a, b] : links) {
    if (remap[a] < 0) continue;
    const double t = distance(points[a], points[b]) / cfg.speed;
    edges.push_back({static_cast<EdgeId>(edges.size()), remap[a], remap[b], t});
    edges.push_back({static_cast<EdgeId>(edges.size()), remap[b], remap[a], t});
  }
  if (edges.empty()) throw ConfigError("roadmap has no edges; try another seed or larger k");

  std::vector<TaskSpec> tasks;
  for (const auto& [s, g] : cfg.tasks) {
    auto nearest = [&](Point2 p) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (distance(points[i], p) < distance(points[best], p)) best = i;
      }
      if (remap[best] < 0) {
        throw ConfigError("task endpoint snaps to a vertex outside the largest component; "
                          "try another seed");
      }
      return remap[best];
    };
    tasks.push_back({nearest(s), nearest(g)});
  }

  EnvironmentGraph graph(cfg.name, std::move(vertices), std::move(edges));

  RenderInfo render;
  render.layout = "prm";
  render.obstacles = cfg.obstacles;

  std::uniform_real_distribution<double> cx(0.0, cfg.width);
  std::uniform_real_distribution<double> cy(0.0, cfg.height);
  std::vector<Constraint> constraints;
  for (std::size_t c = 0; c < cfg.constraint_count; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      Polygon poly = star_polygon(rng, {cx(rng), cy(rng)}, cfg.constraint_radius_min,
                                  cfg.constraint_radius_max, cfg.constraint_polygon_vertices);
      std::vector<char> inside(graph.num_vertices(), 0);
      for (const Vertex& v : graph.vertices()) {
        inside[static_cast<std::size_t>(v.id)] = point_in_polygon({*v.x, *v.y}, poly);
      }
      std::vector<EdgeId> members;
      for (const Edge& e : graph.edges()) {
        if (inside[static_cast<std::size_t>(e.tail)] || inside[static_cast<std::size_t>(e.head)]) {
          members.push_back(e.id);
        }
      }
      if (members.empty()) continue;
      const int id = static_cast<int>(constraints.size());
      constraints.push_back({id, ConstraintKind::Avoid, std::move(members), cfg.weight_lo,
                             cfg.weight_hi, std::nullopt});
      render.constraints.push_back(
          {id, ConstraintKind::Avoid, std::move(poly), default_color(ConstraintKind::Avoid), {}});
      placed = true;
    }
    if (!placed) throw ConfigError("could not place a constraint polygon over any vertex");
  }

  ConstraintSet cs(graph, std::move(constraints));
  Scenario out{cfg.name, std::move(graph), std::move(cs), std::move(tasks), std::move(render)};
  validate_scenario(out);
  return out;
}

Scenario build_named_scenario(std::string_view name, std::uint64_t seed) {
  if (name.rfind("prm-", 0) == 0) {
    std::size_t n = 0, k = 0, c = 0;
    if (std::sscanf(std::string(name).c_str(), "prm-%zu-%zu-%zu", &n, &k, &c) != 3) {
      throw InputError("PRM preset names look like prm-<n>-<k>-<constraints>");
    }
    return build_prm_scenario(prm_campus_config(n, k, c, seed));
  }
  return build_grid_preset(name, seed).scenario;
}

}  // namespace pathpref
