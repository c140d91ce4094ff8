#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pathpref/graph.hpp"

namespace pathpref {

/// Lambda^{ij} = { w : normal . w <= offset }, the weights under which path i
/// costs no more than path j.
struct Halfspace {
  std::vector<double> normal;  // phi^i - phi^j
  double offset = 0.0;         // t^j - t^i
  int path_i = -1;
  int path_j = -1;

  bool contains(const WeightVector& w) const;
};

/// Throws DegenerateHalfspaceError when both paths have the same violation
/// vector and time.
Halfspace halfspace_from_pair(const PathRecord& path_i, const PathRecord& path_j,
                              int id_i = -1, int id_j = -1);

enum class Side { InsideIJ, InsideJI, Mixed };

/// Weights whose shortest path is the same canonical path, represented by
/// the samples that landed there.
struct EquivalenceRegion {
  int id = 0;
  PathRecord canonical_path;
  std::vector<WeightVector> support;
  std::vector<std::size_t> sample_indices;  // positions in RegionSet::samples()

  const WeightVector& representative_weight() const { return support.front(); }
  std::size_t support_count() const { return support.size(); }
};

/// Membership is judged on the support samples: InsideIJ if all satisfy the
/// halfspace (boundary included), InsideJI if none does, Mixed otherwise.
Side classify_region(const EquivalenceRegion& region, const Halfspace& h);

struct SamplingInfo {
  std::size_t sample_count = 0;  // M, excluding the two corners
  std::uint64_t seed = 0;
  WeightVector lower;
  WeightVector upper;
};

class RegionSet {
 public:
  RegionSet() = default;
  RegionSet(std::vector<EquivalenceRegion> regions, std::vector<WeightVector> samples,
            std::vector<int> assignment, SamplingInfo info);

  std::size_t size() const { return regions_.size(); }
  const EquivalenceRegion& operator[](std::size_t i) const { return regions_[i]; }
  const std::vector<EquivalenceRegion>& regions() const { return regions_; }
  auto begin() const { return regions_.begin(); }
  auto end() const { return regions_.end(); }

  /// All drawn samples in draw order: upper corner, lower corner, then M
  /// uniform draws.
  const std::vector<WeightVector>& samples() const { return samples_; }
  const std::vector<int>& assignment() const { return assignment_; }
  const SamplingInfo& info() const { return info_; }
  std::size_t dimension() const { return info_.upper.size(); }

  std::optional<int> find_path(const std::vector<EdgeId>& edges) const;

 private:
  std::vector<EquivalenceRegion> regions_;
  std::vector<WeightVector> samples_;
  std::vector<int> assignment_;
  SamplingInfo info_;
  std::map<std::vector<EdgeId>, int> by_path_;
};

/// Draws M weights uniformly from the constraint box plus the all-upper and
/// all-lower corners, plans each and groups samples by identical path.
/// Region ids follow first appearance, so the upper corner's region is 0.
/// Deterministic for a given seed whatever the job count.
RegionSet sample_regions(const EnvironmentGraph& g, const ConstraintSet& constraints,
                         const TaskSpec& task, std::size_t sample_count, std::uint64_t seed,
                         unsigned jobs = 1);

/// Side lookup for query pairs over one region set. Classifying a pair walks
/// every support sample, so results are memoised per ordered pair. Not
/// thread-safe; give each session its own cache.
class HalfspaceCache {
 public:
  explicit HalfspaceCache(const RegionSet& regions);

  const RegionSet& regions() const { return *regions_; }
  /// Throws DegenerateHalfspaceError for a degenerate pair.
  const Halfspace& halfspace(int i, int j);
  /// Side of every region with respect to Lambda^{ij}.
  const std::vector<Side>& sides(int i, int j);
  bool degenerate(int i, int j) const;

 private:
  const RegionSet* regions_;
  std::map<std::pair<int, int>, Halfspace> halfspaces_;
  std::map<std::pair<int, int>, std::vector<Side>> sides_;
};

}  // namespace pathpref
