#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pathpref/bayes.hpp"
#include "pathpref/query_select.hpp"
#include "pathpref/regions.hpp"
#include "pathpref/scenario.hpp"
#include "pathpref/users.hpp"

namespace pathpref {

struct SessionConfig {
  SelectorKind selector = SelectorKind::Merr;
  double assumed_accuracy = 0.9;  // p-hat
  int budget = 30;                // N
  std::optional<double> stop_threshold;
  PriorKind prior = PriorKind::Uniform;
  std::size_t sample_count = 2000;  // M
  double mvr_beta = 1.0;
  unsigned jobs = 1;  // sampling threads
  // Optional p-hat per compared pair; assumed_accuracy is used when empty.
  PairAccuracy accuracy_hook;
};

enum class StopReason { Running, Budget, NothingToAsk, Threshold };

std::string_view to_string(StopReason reason);

struct SessionResult {
  BestRegion best;
  std::uint64_t seed = 0;
  SessionConfig config;
  std::size_t region_count = 0;
  StopReason stop = StopReason::Budget;
  bool converged_by_vacuity = false;

  // Row n holds the state after n observations; row 0 is the prior.
  std::vector<std::vector<double>> trajectory;
  std::vector<int> current_regions;
  std::optional<int> true_region;
  std::vector<double> true_trajectory;  // posterior of the true region, 0 if unknown
  std::optional<int> iterations_to_half;
  std::optional<int> iterations_to_ninety;
  ObservationLog log;
  std::vector<double> final_posterior;

  int executed() const { return static_cast<int>(trajectory.size()) - 1; }
};

/// One interactive learning loop: ask, record, update, maybe promote.
/// Moving a session is safe; copying is not offered.
class Session {
 public:
  /// Samples the region set of scenario.tasks[task_index] with `seed`.
  Session(const Scenario& scenario, std::size_t task_index, SessionConfig config,
          std::uint64_t seed);
  /// Reuses a sampled region set; `seed` drives the random selector only.
  Session(std::shared_ptr<const RegionSet> regions, SessionConfig config, std::uint64_t seed);

  Session(Session&&) noexcept = default;
  Session& operator=(Session&&) noexcept = default;

  const RegionSet& regions() const { return *regions_; }
  std::shared_ptr<const RegionSet> shared_regions() const { return regions_; }
  const PosteriorState& posterior() const { return posterior_; }
  const ObservationLog& log() const { return log_; }
  const SessionConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }

  int current_region() const { return current_; }
  const PathRecord& current_path() const { return (*regions_)[current_].canonical_path; }
  const WeightVector& current_weight() const { return current_weight_; }
  int iteration() const { return iteration_; }
  const std::vector<int>& informative_counts() const { return informative_; }

  const std::optional<QueryPair>& pending() const { return pending_; }
  StopReason stop_reason() const { return stop_; }
  bool finished() const { return stop_ != StopReason::Running; }
  bool converged_by_vacuity() const { return regions_->size() == 1; }

  /// Applies the answer to the pending query. I keeps the current path,
  /// J accepts the proposal. Throws BudgetExhaustedError once N answers
  /// were taken, ProtocolError when nothing is pending for another reason.
  void step(Choice choice);

  BestRegion best() const { return best_region(posterior_, *regions_); }

  /// Trajectory, thresholds and log. true_region marks the hidden region
  /// when known.
  SessionResult result(std::optional<int> true_region = std::nullopt) const;

 private:
  void init();
  void select_next();
  double accuracy_for(int i, int j) const;

  std::shared_ptr<const RegionSet> regions_;
  SessionConfig config_;
  std::uint64_t seed_ = 0;
  std::unique_ptr<HalfspaceCache> cache_;
  std::unique_ptr<MvrModel> mvr_;
  std::mt19937_64 rng_;

  PosteriorState posterior_;
  ObservationLog log_;
  int current_ = 0;
  WeightVector current_weight_;
  int iteration_ = 0;
  std::vector<int> informative_;
  std::optional<QueryPair> pending_;
  StopReason stop_ = StopReason::Running;

  std::vector<std::vector<double>> trajectory_;
  std::vector<int> current_history_;
};

/// Region whose canonical path is optimal at w; nullopt when that path was
/// never sampled.
std::optional<int> region_of_weight(const Scenario& scenario, std::size_t task_index,
                                    const RegionSet& regions, const WeightVector& w);

/// Drives a session to its end with simulated answers.
SessionResult run_session(Session& session, SimulatedUser& user, std::optional<int> true_region);

/// Samples regions, locates the user's true region and runs the loop.
SessionResult run_session(const Scenario& scenario, std::size_t task_index, SimulatedUser& user,
                          const SessionConfig& config, std::uint64_t seed);

}  // namespace pathpref
