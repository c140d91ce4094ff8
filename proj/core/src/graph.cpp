#include "pathpref/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "pathpref/errors.hpp"

namespace pathpref {

EnvironmentGraph::EnvironmentGraph(std::string name, std::vector<Vertex> vertices,
                                   std::vector<Edge> edges)
    : name_(std::move(name)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id != static_cast<VertexId>(i)) {
      throw InputError("vertex ids must be dense: position " + std::to_string(i) +
                       " holds id " + std::to_string(vertices_[i].id));
    }
  }
  out_.resize(vertices_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != static_cast<EdgeId>(i)) {
      throw InputError("edge ids must be dense: position " + std::to_string(i) +
                       " holds id " + std::to_string(e.id));
    }
    if (!has_vertex(e.tail) || !has_vertex(e.head)) {
      throw InputError("edge " + std::to_string(e.id) + " references an unknown vertex");
    }
    out_[static_cast<std::size_t>(e.tail)].push_back(e.id);
  }
}

namespace {

std::vector<char> reachable(const EnvironmentGraph& g, VertexId from, bool reverse) {
  std::vector<std::vector<VertexId>> adj(g.num_vertices());
  for (const Edge& e : g.edges()) {
    if (reverse) {
      adj[static_cast<std::size_t>(e.head)].push_back(e.tail);
    } else {
      adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
    }
  }
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<VertexId> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate_graph(const EnvironmentGraph& g) {
  ValidationReport report;
  if (g.num_vertices() == 0) {
    report.violations.emplace_back("graph has no vertices");
    return report;
  }
  for (const Edge& e : g.edges()) {
    if (e.tail == e.head) {
      report.violations.push_back("edge " + std::to_string(e.id) + ": self-loop forbidden");
    }
    if (!std::isfinite(e.time) || e.time <= 0.0) {
      report.violations.push_back("edge " + std::to_string(e.id) +
                                  ": traverse time must be positive and finite");
    }
  }
  auto fwd = reachable(g, 0, false);
  auto bwd = reachable(g, 0, true);
  bool strong = std::all_of(fwd.begin(), fwd.end(), [](char c) { return c != 0; }) &&
                std::all_of(bwd.begin(), bwd.end(), [](char c) { return c != 0; });
  if (!strong) report.violations.emplace_back("not strongly connected");
  return report;
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Avoid: return "avoid";
    case ConstraintKind::SpeedLimit: return "speed_limit";
    case ConstraintKind::RoadAgainst: return "road_against";
    case ConstraintKind::RoadFollow: return "road_follow";
    case ConstraintKind::Generic: return "generic";
  }
  return "generic";
}

ConstraintKind constraint_kind_from_string(std::string_view tag) {
  for (auto k : {ConstraintKind::Avoid, ConstraintKind::SpeedLimit, ConstraintKind::RoadAgainst,
                 ConstraintKind::RoadFollow, ConstraintKind::Generic}) {
    if (to_string(k) == tag) return k;
  }
  throw InputError("unknown constraint kind '" + std::string(tag) + "'");
}

ConstraintSet::ConstraintSet(const EnvironmentGraph& g, std::vector<Constraint> constraints)
    : constraints_(std::move(constraints)), membership_(g.num_edges()) {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& c = constraints_[i];
    const std::string tag = "constraint " + std::to_string(c.id);
    if (c.id != static_cast<int>(i)) throw InputError(tag + ": ids must be dense");
    if (c.edge_ids.empty()) throw InputError(tag + ": edge set is empty");
    if (!(c.weight_lo <= c.weight_hi) || !std::isfinite(c.weight_lo) ||
        !std::isfinite(c.weight_hi)) {
      throw InputError(tag + ": invalid weight interval");
    }
    if (c.true_weight && (*c.true_weight < c.weight_lo || *c.true_weight > c.weight_hi)) {
      throw InputError(tag + ": true weight outside its interval");
    }
    for (EdgeId e : c.edge_ids) {
      if (!g.has_edge(e)) throw InputError(tag + ": unknown edge " + std::to_string(e));
      auto& m = membership_[static_cast<std::size_t>(e)];
      if (m.empty() || m.back() != c.id) m.push_back(c.id);
    }
  }
}

std::span<const int> ConstraintSet::constraints_of(EdgeId e) const {
  if (e < 0 || static_cast<std::size_t>(e) >= membership_.size()) {
    throw InputError("unknown edge id " + std::to_string(e));
  }
  return membership_[static_cast<std::size_t>(e)];
}

WeightVector ConstraintSet::lower_corner() const {
  std::vector<double> v;
  v.reserve(constraints_.size());
  for (const auto& c : constraints_) v.push_back(c.weight_lo);
  return WeightVector(std::move(v));
}

WeightVector ConstraintSet::upper_corner() const {
  std::vector<double> v;
  v.reserve(constraints_.size());
  for (const auto& c : constraints_) v.push_back(c.weight_hi);
  return WeightVector(std::move(v));
}

std::optional<WeightVector> ConstraintSet::true_weights() const {
  std::vector<double> v;
  for (const auto& c : constraints_) {
    if (!c.true_weight) return std::nullopt;
    v.push_back(*c.true_weight);
  }
  return WeightVector(std::move(v));
}

bool ConstraintSet::in_box(const WeightVector& w) const {
  if (w.size() != constraints_.size()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < constraints_[i].weight_lo || w[i] > constraints_[i].weight_hi) return false;
  }
  return true;
}

void ConstraintSet::check_nonnegative_costs(const EnvironmentGraph& g) const {
  for (const Edge& e : g.edges()) {
    double lowest = e.time;
    for (int c : constraints_of(e.id)) lowest += constraints_[static_cast<std::size_t>(c)].weight_lo;
    if (lowest < 0.0) {
      std::ostringstream msg;
      msg << "edge " << e.id << " can reach negative combined cost " << lowest
          << " via constraint(s)";
      for (int c : constraints_of(e.id)) msg << ' ' << c;
      throw ConfigError(msg.str());
    }
  }
}

void validate_task(const EnvironmentGraph& g, const TaskSpec& task) {
  if (!g.has_vertex(task.start) || !g.has_vertex(task.goal)) {
    throw InputError("task references an unknown vertex");
  }
  if (task.start == task.goal) throw InputError("task start equals goal");
}

std::vector<int> violation_vector(std::span<const EdgeId> path, const ConstraintSet& constraints) {
  std::vector<int> phi(constraints.dimension(), 0);
  for (EdgeId e : path) {
    for (int c : constraints.constraints_of(e)) ++phi[static_cast<std::size_t>(c)];
  }
  return phi;
}

PathRecord make_path_record(const EnvironmentGraph& g, const ConstraintSet& constraints,
                            const TaskSpec& task, std::vector<EdgeId> edges) {
  if (edges.empty()) throw InputError("path is empty");
  VertexId at = task.start;
  double time = 0.0;
  std::vector<EdgeId> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("path repeats an edge");
  }
  for (EdgeId id : edges) {
    if (!g.has_edge(id)) throw InputError("unknown edge id " + std::to_string(id));
    const Edge& e = g.edge(id);
    if (e.tail != at) throw InputError("path is not contiguous at edge " + std::to_string(id));
    at = e.head;
    time += e.time;
  }
  if (at != task.goal) throw InputError("path does not end at the goal");
  PathRecord rec;
  rec.violations = violation_vector(edges, constraints);
  rec.edges = std::move(edges);
  rec.time = time;
  return rec;
}

double path_cost(const PathRecord& path, const WeightVector& w) {
  if (path.violations.size() != w.size()) {
    throw InputError("dimension mismatch: path has " + std::to_string(path.violations.size()) +
                     " features, weight has " + std::to_string(w.size()));
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) cost += path.violations[i] * w[i];
  return cost + path.time;
}

bool nearly_equal(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= kTieTolerance * scale;
}

namespace {

struct Label {
  double cost;
  double time;
  VertexId vertex;
  EdgeId via;
  std::int32_t parent;
};

std::vector<EdgeId> unwind(const std::vector<Label>& labels, std::int32_t idx) {
  std::vector<EdgeId> seq;
  while (idx >= 0) {
    const Label& l = labels[static_cast<std::size_t>(idx)];
    if (l.via >= 0) seq.push_back(l.via);
    idx = l.parent;
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

// <0 when label a precedes label b in (cost, time, edge sequence) order.
int compare_labels(const std::vector<Label>& labels, std::int32_t a, std::int32_t b) {
  const Label& la = labels[static_cast<std::size_t>(a)];
  const Label& lb = labels[static_cast<std::size_t>(b)];
  if (!nearly_equal(la.cost, lb.cost)) return la.cost < lb.cost ? -1 : 1;
  if (!nearly_equal(la.time, lb.time)) return la.time < lb.time ? -1 : 1;
  auto sa = unwind(labels, a);
  auto sb = unwind(labels, b);
  if (sa == sb) return 0;
  return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end()) ? -1 : 1;
}

}  // namespace

PathRecord shortest_path(const EnvironmentGraph& g, const ConstraintSet& constraints,
                         const WeightVector& w, const TaskSpec& task) {
  validate_task(g, task);
  if (w.size() != constraints.dimension()) {
    throw InputError("weight dimension " + std::to_string(w.size()) + " != constraint count " +
                     std::to_string(constraints.dimension()));
  }
  std::vector<double> combined(g.num_edges());
  for (const Edge& e : g.edges()) {
    double c = e.time;
    for (int k : constraints.constraints_of(e.id)) c += w[static_cast<std::size_t>(k)];
    if (c < 0.0) {
      std::ostringstream msg;
      msg << "negative combined cost " << c << " on edge " << e.id << " (constraints";
      for (int k : constraints.constraints_of(e.id)) msg << ' ' << k;
      msg << ')';
      throw ConfigError(msg.str());
    }
    combined[static_cast<std::size_t>(e.id)] = c;
  }

  std::vector<Label> labels;
  labels.reserve(g.num_edges() + 1);
  std::vector<std::int32_t> best(g.num_vertices(), -1);
  std::vector<char> settled(g.num_vertices(), 0);

  auto after = [&labels](std::int32_t a, std::int32_t b) { return compare_labels(labels, a, b) > 0; };
  std::priority_queue<std::int32_t, std::vector<std::int32_t>, decltype(after)> open(after);

  labels.push_back({0.0, 0.0, task.start, -1, -1});
  best[static_cast<std::size_t>(task.start)] = 0;
  open.push(0);

  while (!open.empty()) {
    std::int32_t li = open.top();
    open.pop();
    const VertexId v = labels[static_cast<std::size_t>(li)].vertex;
    if (settled[static_cast<std::size_t>(v)] || best[static_cast<std::size_t>(v)] != li) continue;
    settled[static_cast<std::size_t>(v)] = 1;
    if (v == task.goal) break;
    for (EdgeId eid : g.out_edges(v)) {
      const Edge& e = g.edge(eid);
      if (settled[static_cast<std::size_t>(e.head)]) continue;
      const Label& cur = labels[static_cast<std::size_t>(li)];
      labels.push_back({cur.cost + combined[static_cast<std::size_t>(eid)], cur.time + e.time,
                        e.head, eid, li});
      auto ni = static_cast<std::int32_t>(labels.size() - 1);
      std::int32_t& incumbent = best[static_cast<std::size_t>(e.head)];
      if (incumbent < 0 || compare_labels(labels, ni, incumbent) < 0) {
        incumbent = ni;
        open.push(ni);
      } else {
        labels.pop_back();
      }
    }
  }

  const std::int32_t goal_label = best[static_cast<std::size_t>(task.goal)];
  if (goal_label < 0 || !settled[static_cast<std::size_t>(task.goal)]) {
    throw ConfigError("goal " + std::to_string(task.goal) + " is unreachable from start " +
                      std::to_string(task.start));
  }
  return make_path_record(g, constraints, task, unwind(labels, goal_label));
}

namespace {

void enumerate_from(const EnvironmentGraph& g, VertexId v, VertexId goal, std::vector<char>& on_path,
                    std::vector<EdgeId>& prefix, std::vector<std::vector<EdgeId>>& out,
                    std::size_t max_count) {
  if (v == goal) {
    if (out.size() >= max_count) {
      throw InstanceTooLargeError("instance too large: more than " + std::to_string(max_count) +
                                  " simple paths");
    }
    out.push_back(prefix);
    return;
  }
  for (EdgeId eid : g.out_edges(v)) {
    const VertexId w = g.edge(eid).head;
    if (on_path[static_cast<std::size_t>(w)]) continue;
    on_path[static_cast<std::size_t>(w)] = 1;
    prefix.push_back(eid);
    enumerate_from(g, w, goal, on_path, prefix, out, max_count);
    prefix.pop_back();
    on_path[static_cast<std::size_t>(w)] = 0;
  }
}

}  // namespace

std::vector<PathRecord> enumerate_paths(const EnvironmentGraph& g,
                                        const ConstraintSet& constraints,
                                        const TaskSpec& task, std::size_t max_count) {
  validate_task(g, task);
  std::vector<char> on_path(g.num_vertices(), 0);
  on_path[static_cast<std::size_t>(task.start)] = 1;
  std::vector<EdgeId> prefix;
  std::vector<std::vector<EdgeId>> sequences;
  enumerate_from(g, task.start, task.goal, on_path, prefix, sequences, max_count);

  std::vector<PathRecord> paths;
  paths.reserve(sequences.size());
  for (auto& seq : sequences) {
    paths.push_back(make_path_record(g, constraints, task, std::move(seq)));
  }
  return paths;
}

}  // namespace pathpref
