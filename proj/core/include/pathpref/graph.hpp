#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathpref {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

struct Vertex {
  VertexId id = 0;
  // Planar coordinates, only used for rendering and geometric scenarios.
  std::optional<double> x;
  std::optional<double> y;

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  EdgeId id = 0;
  VertexId tail = 0;
  VertexId head = 0;
  double time = 0.0;  // seconds

  bool operator==(const Edge&) const = default;
};

/// Directed multigraph with per-edge traversal times. Vertex and edge ids
/// are dense: the element with id k is stored at position k.
class EnvironmentGraph {
 public:
  EnvironmentGraph() = default;

  /// Throws InputError when ids are not dense or an edge references an
  /// unknown vertex. Everything else is left to validate_graph().
  EnvironmentGraph(std::string name, std::vector<Vertex> vertices,
                   std::vector<Edge> edges);

  const std::string& name() const { return name_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }
  std::span<const EdgeId> out_edges(VertexId v) const {
    return out_.at(static_cast<std::size_t>(v));
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool has_vertex(VertexId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < vertices_.size();
  }
  bool has_edge(EdgeId e) const {
    return e >= 0 && static_cast<std::size_t>(e) < edges_.size();
  }

  bool operator==(const EnvironmentGraph& o) const {
    return name_ == o.name_ && vertices_ == o.vertices_ && edges_ == o.edges_;
  }

 private:
  std::string name_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_graph(const EnvironmentGraph& g);

enum class ConstraintKind { Avoid, SpeedLimit, RoadAgainst, RoadFollow, Generic };

std::string_view to_string(ConstraintKind kind);
/// Throws InputError on an unknown tag.
ConstraintKind constraint_kind_from_string(std::string_view tag);

struct Constraint {
  int id = 0;
  ConstraintKind kind = ConstraintKind::Generic;
  std::vector<EdgeId> edge_ids;
  double weight_lo = 0.0;
  double weight_hi = 0.0;
  std::optional<double> true_weight;  // simulation only

  bool operator==(const Constraint&) const = default;
};

/// One value per constraint, in constraint-id order.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values) : values_(std::move(values)) {}
  WeightVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> values_;
};

/// The constraint list of a scenario plus the edge -> constraints index.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  /// Validates ids (dense), edge membership and weight intervals.
  ConstraintSet(const EnvironmentGraph& g, std::vector<Constraint> constraints);

  std::size_t dimension() const { return constraints_.size(); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& operator[](std::size_t i) const { return constraints_[i]; }
  std::size_t num_edges() const { return membership_.size(); }

  /// Constraint indices whose edge set contains e. Throws InputError on an
  /// unknown edge.
  std::span<const int> constraints_of(EdgeId e) const;

  WeightVector lower_corner() const;
  WeightVector upper_corner() const;
  /// Present only when every constraint carries a true weight.
  std::optional<WeightVector> true_weights() const;
  bool in_box(const WeightVector& w) const;

  /// Static check that t(e) + w(e) >= 0 for every edge and every weight in
  /// the box. Throws ConfigError naming the first offending edge.
  void check_nonnegative_costs(const EnvironmentGraph& g) const;

  bool operator==(const ConstraintSet& o) const { return constraints_ == o.constraints_; }

 private:
  std::vector<Constraint> constraints_;
  std::vector<std::vector<int>> membership_;
};

struct TaskSpec {
  VertexId start = 0;
  VertexId goal = 0;

  bool operator==(const TaskSpec&) const = default;
};

/// Throws InputError if a task vertex is missing or start == goal.
void validate_task(const EnvironmentGraph& g, const TaskSpec& task);

/// A start-goal path with its features: the violation vector and total time.
/// The cost under a weight is derived (path_cost), never stored.
struct PathRecord {
  std::vector<EdgeId> edges;
  std::vector<int> violations;
  double time = 0.0;

  bool operator==(const PathRecord& o) const { return edges == o.edges; }
};

std::vector<int> violation_vector(std::span<const EdgeId> path, const ConstraintSet& constraints);

/// Builds a PathRecord, checking connectivity, distinct edges and the task
/// endpoints.
PathRecord make_path_record(const EnvironmentGraph& g, const ConstraintSet& constraints,
                            const TaskSpec& task, std::vector<EdgeId> edges);

/// dot(phi, w) + t
double path_cost(const PathRecord& path, const WeightVector& w);

/// Relative tolerance under which two costs (or times) count as tied.
inline constexpr double kTieTolerance = 1e-9;
bool nearly_equal(double a, double b);

/// Minimum-cost path under the combined edge cost t(e) + sum of the weights of
/// the constraints containing e. Ties go to the lower total time, then to the
/// lexicographically smallest edge-id sequence.
PathRecord shortest_path(const EnvironmentGraph& g, const ConstraintSet& constraints,
                         const WeightVector& w, const TaskSpec& task);

/// All simple start-goal paths in depth-first order. Throws
/// InstanceTooLargeError once more than max_count paths exist.
std::vector<PathRecord> enumerate_paths(const EnvironmentGraph& g,
                                        const ConstraintSet& constraints,
                                        const TaskSpec& task, std::size_t max_count);

}  // namespace pathpref
