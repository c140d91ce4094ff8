#pragma once

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pathpref/bayes.hpp"
#include "pathpref/regions.hpp"

namespace pathpref {

enum class SelectorKind { Merr, Mvr, Random };

std::string_view to_string(SelectorKind kind);
SelectorKind selector_from_string(std::string_view name);

/// The next question: the current path against a proposed alternative.
struct QueryPair {
  int current = -1;
  int proposed = -1;
  SelectorKind selector = SelectorKind::Merr;
  double objective = 0.0;  // selector-specific score of the proposal
};

/// Expected sum of q after asking a pair, averaged over both answers with the
/// learner's own predictive probabilities.
double expected_measure_after(const PosteriorState& state, std::span<const Side> sides,
                              double p_hat);

/// Sum of q now minus its expectation after asking; the expected increase of
/// f = 1 - sum q. Used with both paths free, this is the quantity whose
/// diminishing returns the property tests check.
double expected_measure_gain(const PosteriorState& state, std::span<const Side> sides,
                             double p_hat);

/// Relative tolerance inside which two candidate scores are a tie.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Greedy maximum equivalence-region removal: the candidate minimising the
/// expected post-query sum of q. Candidates are live regions other than
/// `current`; ties go to the lowest region id. nullopt means nothing to ask.
std::optional<QueryPair> merr_select(const PosteriorState& state, HalfspaceCache& cache,
                                     int current, double p_hat);

/// p-hat as a function of the compared region pair (i, j).
using PairAccuracy = std::function<double(int, int)>;

std::optional<QueryPair> merr_select(const PosteriorState& state, HalfspaceCache& cache,
                                     int current, const PairAccuracy& p_hat);

/// Logistic response model over weight samples for the volume-removal
/// baseline. Sample masses start uniform and are multiplied by the response
/// probability of each observed answer.
class MvrModel {
 public:
  MvrModel(const RegionSet& regions, double beta);

  double beta() const { return beta_; }
  /// Masses normalised to sum 1, one per sample of the region set.
  std::vector<double> masses() const;

  /// Probability that a logistic user facing (i, j) at sample s picks i.
  double prefer_i(int i, int j, std::size_t sample) const;
  std::size_t region_count() const { return regions_->size(); }
  std::size_t sample_count() const { return samples_; }

  /// Expected removed mass of asking (current, candidate):
  /// sum over answers of P(answer) * mass removed by that answer.
  double score(int current, int candidate) const;
  /// Same, against a precomputed masses() snapshot.
  double score(std::span<const double> mass, int current, int candidate) const;
  void update(int i, int j, Choice choice);

 private:
  double cost(int region, std::size_t sample) const {
    return costs_[static_cast<std::size_t>(region) * samples_ + sample];
  }

  const RegionSet* regions_;
  double beta_;
  std::size_t samples_;
  std::vector<double> costs_;     // region-major path costs at every sample
  std::vector<double> log_mass_;
};

/// Standard logistic 1 / (1 + exp(x)), stable for large |x|.
double logistic_of_negated(double x);

/// eligible: optional per-region mask (e.g. live regions); empty means all.
std::optional<QueryPair> mvr_select(const MvrModel& model, int current,
                                    std::span<const char> eligible = {});

std::optional<QueryPair> random_select(std::size_t region_count, int current,
                                       std::mt19937_64& rng, std::span<const char> eligible = {});

}  // namespace pathpref
