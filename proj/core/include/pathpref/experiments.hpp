#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathpref/bayes.hpp"
#include "pathpref/query_select.hpp"
#include "pathpref/users.hpp"

namespace pathpref {

inline constexpr int kBatchSchemaVersion = 1;

struct ScenarioSpec {
  std::string preset;  // grid preset or prm-<n>-<k>-<c>; empty when file is set
  std::filesystem::path file;
  std::uint64_t layout_seed = 1;
  std::size_t task = 0;

  std::string label() const;
};

struct UserSpec {
  UserModel model = UserModel::MerrConstant;
  std::optional<double> accuracy;         // p, merr_constant
  std::optional<double> beta;             // fixed beta, mvr_logistic
  std::optional<double> target_accuracy;  // calibrated beta, mvr_logistic
  double tolerance = 0.02;

  /// Accuracy the p-hat policies are relative to.
  double nominal_accuracy() const;
  std::string label() const;
};

/// p-hat = p + offset, or a fixed value.
struct AccuracyPolicy {
  bool relative = true;
  double value = 0.0;

  double resolve(double p) const { return relative ? p + value : value; }
  std::string label() const;
};

struct ExperimentConfig {
  std::string name = "batch";
  std::uint64_t master_seed = 1;
  int trials = 10;
  int budget = 30;
  std::size_t sample_count = 2000;
  PriorKind prior = PriorKind::Uniform;
  std::optional<double> stop_threshold;
  std::optional<double> mvr_beta;  // learner beta; matched to the user when unset
  // "uniform": fresh draw from the weight box; "sample": one of the region
  // samples, so the true region is always in the hypothesis set.
  std::string true_weight = "uniform";
  std::vector<ScenarioSpec> scenarios;
  std::vector<UserSpec> users;
  std::vector<SelectorKind> selectors{SelectorKind::Merr};
  std::vector<AccuracyPolicy> policies{AccuracyPolicy{}};
};

/// Throws SchemaError on a malformed document.
ExperimentConfig experiment_from_json(const nlohmann::json& doc);
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// One (scenario, user, selector, policy) combination.
struct CellSpec {
  int index = 0;
  std::size_t scenario = 0;
  std::size_t user = 0;
  SelectorKind selector = SelectorKind::Merr;
  AccuracyPolicy policy;
};

/// Cells in nesting order scenario, user, selector, policy.
std::vector<CellSpec> expand_cells(const ExperimentConfig& cfg);

/// Seed derivation. splitmix64 of the running state after xoring in each
/// component, so trial t of scenario s sees the same seeds in every cell.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t region_seed(std::uint64_t master, std::size_t scenario);
std::uint64_t trial_seed(std::uint64_t master, std::size_t scenario, int trial);

enum class TrialStream : std::uint64_t { TrueWeight = 1, User = 2, Selector = 3, Panel = 4 };
std::uint64_t stream_seed(std::uint64_t trial_seed, TrialStream stream);

struct BatchRow {
  int cell = 0;
  std::string scenario;
  std::size_t task = 0;
  std::string user;
  std::string selector;
  double p_hat = 0.0;
  double beta = 0.0;  // logistic user's beta, 0 otherwise
  int trial = 0;
  std::uint64_t seed = 0;
  int iteration = 0;
  bool executed = true;
  std::string status = "ok";
  std::size_t region_count = 0;
  int true_region = -1;
  double posterior_true = 0.0;
  double max_posterior = 0.0;
  int current_region = -1;
  bool current_correct = false;
  int best_region = -1;
  int iterations_to_half = -1;
  int iterations_to_ninety = -1;
  std::string message;

  bool operator==(const BatchRow&) const = default;
};

struct BatchResult {
  ExperimentConfig config;
  std::vector<CellSpec> cells;
  std::vector<BatchRow> rows;  // ordered by (cell, trial, iteration)
};

/// Runs every (cell, trial) on `jobs` worker threads. A failing trial
/// becomes a single error row; the batch continues.
BatchResult run_batch(const ExperimentConfig& cfg, unsigned jobs = 1);

/// First line is a '#' comment carrying the schema version and timestamp.
void write_batch_csv(std::ostream& out, const BatchResult& batch, const std::string& timestamp);
std::vector<BatchRow> read_batch_csv(std::istream& in);

std::string batch_csv_header();

struct CellSummary {
  int cell = 0;
  std::string label;
  int trials = 0;
  int errors = 0;
  double fraction_half = 0.0;     // trials whose true posterior reached 0.5
  double fraction_ninety = 0.0;   // ... reached 0.9
  std::vector<double> median;     // per iteration, over trials
  double median_final = 0.0;
  std::map<int, std::vector<double>> snapshots;  // iteration -> sorted values
};

/// Fraction and median statistics per cell, in cell order.
std::vector<CellSummary> summarize(const std::vector<BatchRow>& rows);
nlohmann::json summary_to_json(const std::vector<CellSummary>& summary);

/// Median of a nonempty sample, averaging the middle pair.
double median(std::vector<double> values);

}  // namespace pathpref
