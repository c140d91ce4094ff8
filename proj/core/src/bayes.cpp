#include "pathpref/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pathpref/errors.hpp"

namespace pathpref {

namespace {

void check_accuracy(double p_hat) {
  if (!(p_hat > 0.5 && p_hat <= 1.0)) {
    throw InputError("assumed accuracy must lie in (0.5, 1], got " + std::to_string(p_hat));
  }
}

}  // namespace

double region_likelihood(const Observation& obs, Side side) {
  check_accuracy(obs.assumed_accuracy);
  const double p = obs.assumed_accuracy;
  switch (side) {
    case Side::InsideIJ: return obs.choice == Choice::I ? p : 1.0 - p;
    case Side::InsideJI: return obs.choice == Choice::J ? p : 1.0 - p;
    case Side::Mixed: return 0.5;
  }
  return 0.5;
}

double region_likelihood(const Observation& obs, int region, HalfspaceCache& cache) {
  const auto& sides = cache.sides(obs.path_i, obs.path_j);
  return region_likelihood(obs, sides.at(static_cast<std::size_t>(region)));
}

PosteriorState::PosteriorState(std::vector<double> prior) : prior_(std::move(prior)) {
  if (prior_.empty()) throw InputError("prior over an empty region set");
  double total = 0.0;
  for (double p : prior_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("prior entries must be nonnegative");
    total += p;
  }
  if (!(total > 0.0)) throw InputError("prior must have positive mass");
  log_q_.resize(prior_.size());
  for (std::size_t r = 0; r < prior_.size(); ++r) {
    prior_[r] /= total;
    log_q_[r] = std::log(prior_[r]);
  }
  renormalize();
}

PosteriorState PosteriorState::for_regions(const RegionSet& regions, PriorKind kind) {
  std::vector<double> prior(regions.size(), 1.0);
  if (kind == PriorKind::SupportProportional) {
    for (std::size_t r = 0; r < regions.size(); ++r) {
      prior[r] = static_cast<double>(regions[r].support_count());
    }
  }
  return PosteriorState(std::move(prior));
}

double PosteriorState::measure(std::size_t r) const {
  const double lq = log_q_[r];
  if (lq == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::max(std::exp(lq), std::numeric_limits<double>::min());
}

double PosteriorState::total_measure() const {
  double total = 0.0;
  for (std::size_t r = 0; r < size(); ++r) total += measure(r);
  return total;
}

bool PosteriorState::live(std::size_t r) const {
  return log_q_[r] != -std::numeric_limits<double>::infinity();
}

void PosteriorState::multiply(std::span<const double> likelihoods) {
  if (likelihoods.size() != size()) throw InputError("likelihood vector size mismatch");
  std::vector<double> next(log_q_);
  bool any_live = false;
  for (std::size_t r = 0; r < next.size(); ++r) {
    const double l = likelihoods[r];
    if (!(l >= 0.0 && l <= 1.0)) throw InputError("likelihood outside [0, 1]");
    next[r] += std::log(l);
    any_live = any_live || next[r] != -std::numeric_limits<double>::infinity();
  }
  if (!any_live) throw ContradictoryFeedbackError("feedback rules out every region");
  log_q_ = std::move(next);
  renormalize();
}

void PosteriorState::renormalize() {
  const double top = *std::max_element(log_q_.begin(), log_q_.end());
  prob_.assign(log_q_.size(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < log_q_.size(); ++r) {
    prob_[r] = std::exp(log_q_[r] - top);
    total += prob_[r];
  }
  for (double& p : prob_) p /= total;
}

PosteriorState update_posterior(PosteriorState state, const Observation& obs,
                                HalfspaceCache& cache) {
  check_accuracy(obs.assumed_accuracy);
  const auto& sides = cache.sides(obs.path_i, obs.path_j);
  if (sides.size() != state.size()) throw InputError("posterior does not cover the region set");
  std::vector<double> lik(sides.size());
  for (std::size_t r = 0; r < sides.size(); ++r) lik[r] = region_likelihood(obs, sides[r]);
  state.multiply(lik);
  return state;
}

double total_measure_deficit(const PosteriorState& state) { return 1.0 - state.total_measure(); }

BestRegion best_region(const PosteriorState& state, const RegionSet& regions) {
  if (state.size() == 0 || state.size() != regions.size()) {
    throw InputError("best_region needs a posterior over a nonempty region set");
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < state.size(); ++r) {
    if (state.probability(r) > state.probability(best)) best = r;
  }
  return {static_cast<int>(best), regions[best].representative_weight()};
}

PosteriorState replay(const RegionSet& regions, PriorKind prior, const ObservationLog& log) {
  HalfspaceCache cache(regions);
  PosteriorState state = PosteriorState::for_regions(regions, prior);
  for (const Observation& obs : log) state = update_posterior(std::move(state), obs, cache);
  return state;
}

}  // namespace pathpref
