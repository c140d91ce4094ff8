#include "pathpref/regions.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "pathpref/errors.hpp"

namespace pathpref {

bool Halfspace::contains(const WeightVector& w) const {
  if (w.size() != normal.size()) throw InputError("halfspace dimension mismatch");
  double dot = 0.0;
  for (std::size_t k = 0; k < normal.size(); ++k) {
    if (normal[k] != 0.0) dot += normal[k] * w[k];
  }
  return dot <= offset;
}

Halfspace halfspace_from_pair(const PathRecord& path_i, const PathRecord& path_j, int id_i,
                              int id_j) {
  if (path_i.violations.size() != path_j.violations.size()) {
    throw InputError("paths have different feature dimensions");
  }
  Halfspace h;
  h.normal.resize(path_i.violations.size());
  bool all_zero = true;
  for (std::size_t k = 0; k < h.normal.size(); ++k) {
    h.normal[k] = static_cast<double>(path_i.violations[k] - path_j.violations[k]);
    all_zero = all_zero && h.normal[k] == 0.0;
  }
  h.offset = path_j.time - path_i.time;
  if (all_zero && path_i.time == path_j.time) {
    throw DegenerateHalfspaceError("paths " + std::to_string(id_i) + " and " +
                                   std::to_string(id_j) +
                                   " have identical violations and time");
  }
  h.path_i = id_i;
  h.path_j = id_j;
  return h;
}

Side classify_region(const EquivalenceRegion& region, const Halfspace& h) {
  std::size_t inside = 0;
  for (const WeightVector& w : region.support) {
    if (h.contains(w)) ++inside;
  }
  if (inside == region.support.size()) return Side::InsideIJ;
  if (inside == 0) return Side::InsideJI;
  return Side::Mixed;
}

RegionSet::RegionSet(std::vector<EquivalenceRegion> regions, std::vector<WeightVector> samples,
                     std::vector<int> assignment, SamplingInfo info)
    : regions_(std::move(regions)),
      samples_(std::move(samples)),
      assignment_(std::move(assignment)),
      info_(std::move(info)) {
  for (const auto& r : regions_) by_path_.emplace(r.canonical_path.edges, r.id);
}

std::optional<int> RegionSet::find_path(const std::vector<EdgeId>& edges) const {
  auto it = by_path_.find(edges);
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

RegionSet sample_regions(const EnvironmentGraph& g, const ConstraintSet& constraints,
                         const TaskSpec& task, std::size_t sample_count, std::uint64_t seed,
                         unsigned jobs) {
  if (sample_count == 0) throw InputError("sample count must be at least 1");
  const std::size_t d = constraints.dimension();

  std::vector<WeightVector> samples;
  samples.reserve(sample_count + 2);
  samples.push_back(constraints.upper_corner());
  samples.push_back(constraints.lower_corner());
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    std::vector<double> v(d);
    for (std::size_t k = 0; k < d; ++k) {
      const Constraint& c = constraints[k];
      std::uniform_real_distribution<double> dist(c.weight_lo, c.weight_hi);
      v[k] = c.weight_lo == c.weight_hi ? c.weight_lo : dist(rng);
    }
    samples.emplace_back(std::move(v));
  }

  std::vector<PathRecord> optimal(samples.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(samples.size())));
  if (jobs == 1) {
    for (std::size_t s = 0; s < samples.size(); ++s) {
      optimal[s] = shortest_path(g, constraints, samples[s], task);
    }
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        try {
          for (std::size_t s = t; s < samples.size(); s += jobs) {
            optimal[s] = shortest_path(g, constraints, samples[s], task);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Ordered reduction by sample index keeps ids independent of scheduling.
  std::map<std::vector<EdgeId>, int> ids;
  std::vector<EquivalenceRegion> regions;
  std::vector<int> assignment(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto [it, fresh] = ids.emplace(optimal[s].edges, static_cast<int>(regions.size()));
    if (fresh) {
      EquivalenceRegion r;
      r.id = it->second;
      r.canonical_path = std::move(optimal[s]);
      regions.push_back(std::move(r));
    }
    auto& region = regions[static_cast<std::size_t>(it->second)];
    region.support.push_back(samples[s]);
    region.sample_indices.push_back(s);
    assignment[s] = it->second;
  }

  SamplingInfo info{sample_count, seed, constraints.lower_corner(), constraints.upper_corner()};
  return RegionSet(std::move(regions), std::move(samples), std::move(assignment), std::move(info));
}

HalfspaceCache::HalfspaceCache(const RegionSet& regions) : regions_(&regions) {}

bool HalfspaceCache::degenerate(int i, int j) const {
  const auto& pi = (*regions_)[static_cast<std::size_t>(i)].canonical_path;
  const auto& pj = (*regions_)[static_cast<std::size_t>(j)].canonical_path;
  return pi.violations == pj.violations && pi.time == pj.time;
}

const Halfspace& HalfspaceCache::halfspace(int i, int j) {
  auto key = std::make_pair(i, j);
  auto it = halfspaces_.find(key);
  if (it != halfspaces_.end()) return it->second;
  const auto& set = *regions_;
  Halfspace h = halfspace_from_pair(set[static_cast<std::size_t>(i)].canonical_path,
                                    set[static_cast<std::size_t>(j)].canonical_path, i, j);
  return halfspaces_.emplace(key, std::move(h)).first->second;
}

const std::vector<Side>& HalfspaceCache::sides(int i, int j) {
  auto key = std::make_pair(i, j);
  auto it = sides_.find(key);
  if (it != sides_.end()) return it->second;

  // Lambda^{ji} is the mirror of Lambda^{ij} except on the hyperplane itself,
  // where both contain the sample, so the mirror cannot be reused.
  const Halfspace& h = halfspace(i, j);
  std::vector<Side> out;
  out.reserve(regions_->size());
  for (const auto& region : *regions_) out.push_back(classify_region(region, h));
  return sides_.emplace(key, std::move(out)).first->second;
}

}  // namespace pathpref
