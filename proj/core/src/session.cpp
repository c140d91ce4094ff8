#include "pathpref/session.hpp"

#include <algorithm>

#include "pathpref/errors.hpp"

namespace pathpref {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Running: return "running";
    case StopReason::Budget: return "budget";
    case StopReason::NothingToAsk: return "nothing_to_ask";
    case StopReason::Threshold: return "threshold";
  }
  return "running";
}

Session::Session(const Scenario& scenario, std::size_t task_index, SessionConfig config,
                 std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  if (task_index >= scenario.tasks.size()) throw InputError("task index out of range");
  validate_scenario(scenario);
  regions_ = std::make_shared<const RegionSet>(
      sample_regions(scenario.graph, scenario.constraints, scenario.tasks[task_index],
                     config_.sample_count, seed, config_.jobs));
  init();
}

Session::Session(std::shared_ptr<const RegionSet> regions, SessionConfig config,
                 std::uint64_t seed)
    : regions_(std::move(regions)), config_(std::move(config)), seed_(seed) {
  if (!regions_ || regions_->size() == 0) throw InputError("session needs a nonempty region set");
  init();
}

void Session::init() {
  if (config_.budget < 0) throw InputError("budget must be nonnegative");
  if (!(config_.assumed_accuracy > 0.5 && config_.assumed_accuracy <= 1.0)) {
    throw InputError("assumed accuracy must lie in (0.5, 1]");
  }
  if (config_.stop_threshold && !(*config_.stop_threshold > 0.0 && *config_.stop_threshold <= 1.0)) {
    throw InputError("stop threshold must lie in (0, 1]");
  }
  cache_ = std::make_unique<HalfspaceCache>(*regions_);
  if (config_.selector == SelectorKind::Mvr) {
    mvr_ = std::make_unique<MvrModel>(*regions_, config_.mvr_beta);
  }
  rng_.seed(seed_);
  posterior_ = PosteriorState::for_regions(*regions_, config_.prior);
  // Sample 0 is the all-upper corner, whose path starts the session.
  current_ = regions_->assignment().front();
  current_weight_ = regions_->samples().front();
  informative_.assign(regions_->size(), 0);
  trajectory_.push_back(posterior_.probabilities());
  current_history_.push_back(current_);
  select_next();
}

double Session::accuracy_for(int i, int j) const {
  return config_.accuracy_hook ? config_.accuracy_hook(i, j) : config_.assumed_accuracy;
}

void Session::select_next() {
  pending_.reset();
  if (iteration_ >= config_.budget) {
    stop_ = StopReason::Budget;
    return;
  }
  if (config_.stop_threshold) {
    const auto& p = posterior_.probabilities();
    if (*std::max_element(p.begin(), p.end()) >= *config_.stop_threshold) {
      stop_ = StopReason::Threshold;
      return;
    }
  }
  const std::size_t n = regions_->size();
  std::vector<char> eligible(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const int j = static_cast<int>(r);
    eligible[r] = posterior_.live(r) && j != current_ && !cache_->degenerate(current_, j);
  }
  switch (config_.selector) {
    case SelectorKind::Merr:
      pending_ = merr_select(posterior_, *cache_, current_,
                             [this](int i, int j) { return accuracy_for(i, j); });
      break;
    case SelectorKind::Mvr:
      pending_ = mvr_select(*mvr_, current_, eligible);
      break;
    case SelectorKind::Random:
      pending_ = random_select(n, current_, rng_, eligible);
      break;
  }
  if (!pending_) stop_ = StopReason::NothingToAsk;
}

void Session::step(Choice choice) {
  if (!pending_) {
    if (stop_ == StopReason::Budget) throw BudgetExhaustedError();
    throw ProtocolError("no pending query");
  }
  const QueryPair q = *pending_;
  Observation obs{q.current, q.proposed, choice, accuracy_for(q.current, q.proposed),
                  iteration_ + 1};
  // Copy first: a contradictory update must leave the session untouched.
  posterior_ = update_posterior(posterior_, obs, *cache_);
  log_.append(obs);
  const auto& sides = cache_->sides(q.current, q.proposed);
  for (std::size_t r = 0; r < sides.size(); ++r) {
    if (sides[r] != Side::Mixed) ++informative_[r];
  }
  if (mvr_) mvr_->update(q.current, q.proposed, choice);
  if (choice == Choice::J) {
    current_ = q.proposed;
    current_weight_ = (*regions_)[current_].representative_weight();
  }
  ++iteration_;
  trajectory_.push_back(posterior_.probabilities());
  current_history_.push_back(current_);
  select_next();
}

SessionResult Session::result(std::optional<int> true_region) const {
  SessionResult out;
  out.best = best();
  out.seed = seed_;
  out.config = config_;
  out.region_count = regions_->size();
  out.stop = stop_ == StopReason::Running ? StopReason::Budget : stop_;
  out.converged_by_vacuity = converged_by_vacuity();
  out.trajectory = trajectory_;
  out.current_regions = current_history_;
  out.true_region = true_region;
  out.log = log_;
  out.final_posterior = posterior_.probabilities();
  out.true_trajectory.reserve(trajectory_.size());
  for (std::size_t n = 0; n < trajectory_.size(); ++n) {
    const double p = true_region ? trajectory_[n][static_cast<std::size_t>(*true_region)] : 0.0;
    out.true_trajectory.push_back(p);
    if (!out.iterations_to_half && p >= 0.5) out.iterations_to_half = static_cast<int>(n);
    if (!out.iterations_to_ninety && p >= 0.9) out.iterations_to_ninety = static_cast<int>(n);
  }
  return out;
}

std::optional<int> region_of_weight(const Scenario& scenario, std::size_t task_index,
                                    const RegionSet& regions, const WeightVector& w) {
  const PathRecord path =
      shortest_path(scenario.graph, scenario.constraints, w, scenario.tasks.at(task_index));
  return regions.find_path(path.edges);
}

SessionResult run_session(Session& session, SimulatedUser& user, std::optional<int> true_region) {
  while (session.pending()) {
    const QueryPair& q = *session.pending();
    const Choice c = user_respond(session.regions()[q.current].canonical_path,
                                  session.regions()[q.proposed].canonical_path, user);
    session.step(c);
  }
  return session.result(true_region);
}

SessionResult run_session(const Scenario& scenario, std::size_t task_index, SimulatedUser& user,
                          const SessionConfig& config, std::uint64_t seed) {
  Session session(scenario, task_index, config, seed);
  const auto truth = region_of_weight(scenario, task_index, session.regions(), user.true_weight);
  return run_session(session, user, truth);
}

}  // namespace pathpref
