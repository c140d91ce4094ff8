#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pathpref/graph.hpp"
#include "pathpref/regions.hpp"

namespace pathpref {

/// Which path of the pair the user preferred. I corresponds to U = 1.
enum class Choice { I, J };

struct Observation {
  int path_i = -1;  // region ids of the compared canonical paths
  int path_j = -1;
  Choice choice = Choice::I;
  double assumed_accuracy = 0.9;  // p-hat, in (0.5, 1]
  int iteration = 0;

  bool operator==(const Observation&) const = default;
};

/// Append-only feedback history.
class ObservationLog {
 public:
  void append(Observation obs) { entries_.push_back(obs); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Observation& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Observation>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<Observation> entries_;
};

/// Observation likelihood of a region on the given side of Lambda^{ij}.
double region_likelihood(const Observation& obs, Side side);
double region_likelihood(const Observation& obs, int region, HalfspaceCache& cache);

enum class PriorKind { Uniform, SupportProportional };

/// Discrete posterior over regions. The unnormalised measure q is kept as
/// log(prior) + sum of log-likelihoods so long sessions do not underflow.
class PosteriorState {
 public:
  PosteriorState() = default;
  /// prior must be nonnegative with a positive sum; it is normalised here.
  explicit PosteriorState(std::vector<double> prior);
  static PosteriorState for_regions(const RegionSet& regions, PriorKind kind);

  std::size_t size() const { return log_q_.size(); }
  double probability(std::size_t r) const { return prob_[r]; }
  const std::vector<double>& probabilities() const { return prob_; }
  const std::vector<double>& prior() const { return prior_; }
  double log_measure(std::size_t r) const { return log_q_[r]; }

  /// q(r), with underflow clamped to the smallest normal double. Regions
  /// ruled out by a zero likelihood report exactly 0.
  double measure(std::size_t r) const;
  double total_measure() const;
  bool live(std::size_t r) const;

  /// q(r) <- q(r) * likelihoods[r]. Throws ContradictoryFeedbackError when
  /// every region would reach zero; the state is unchanged in that case.
  void multiply(std::span<const double> likelihoods);

 private:
  void renormalize();

  std::vector<double> prior_;
  std::vector<double> log_q_;
  std::vector<double> prob_;
};

PosteriorState update_posterior(PosteriorState state, const Observation& obs,
                                HalfspaceCache& cache);

/// f = 1 - sum of q over all regions.
double total_measure_deficit(const PosteriorState& state);

struct BestRegion {
  int region = -1;
  WeightVector weight;
};

/// Highest posterior; ties go to the lowest region id.
BestRegion best_region(const PosteriorState& state, const RegionSet& regions);

/// Prior plus every observation of the log, applied in order.
PosteriorState replay(const RegionSet& regions, PriorKind prior, const ObservationLog& log);

}  // namespace pathpref
