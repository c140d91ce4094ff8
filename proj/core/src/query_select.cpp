#include "pathpref/query_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathpref/errors.hpp"

namespace pathpref {

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Merr: return "merr";
    case SelectorKind::Mvr: return "mvr";
    case SelectorKind::Random: return "random";
  }
  return "merr";
}

SelectorKind selector_from_string(std::string_view name) {
  for (auto k : {SelectorKind::Merr, SelectorKind::Mvr, SelectorKind::Random}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown selector '" + std::string(name) + "'");
}

namespace {

// Predictive answer probabilities (normalised a_U) for one candidate pair.
std::pair<double, double> predictive(const PosteriorState& state, std::span<const Side> sides,
                                     double p_hat) {
  if (sides.size() != state.size()) throw InputError("side vector does not match posterior");
  double a_i = 0.0;
  double a_j = 0.0;
  for (std::size_t r = 0; r < sides.size(); ++r) {
    const double pr = state.probability(r);
    switch (sides[r]) {
      case Side::InsideIJ:
        a_i += p_hat * pr;
        a_j += (1.0 - p_hat) * pr;
        break;
      case Side::InsideJI:
        a_i += (1.0 - p_hat) * pr;
        a_j += p_hat * pr;
        break;
      case Side::Mixed:
        a_i += 0.5 * pr;
        a_j += 0.5 * pr;
        break;
    }
  }
  return {a_i, a_j};
}

std::vector<int> candidates(std::size_t count, int current, std::span<const char> eligible) {
  std::vector<int> out;
  for (std::size_t r = 0; r < count; ++r) {
    if (static_cast<int>(r) == current) continue;
    if (!eligible.empty() && !eligible[r]) continue;
    out.push_back(static_cast<int>(r));
  }
  return out;
}

// Lowest id among scores within tolerance of the extreme value.
std::size_t pick(const std::vector<double>& scores, bool maximise) {
  double extreme = scores.front();
  for (double s : scores) extreme = maximise ? std::max(extreme, s) : std::min(extreme, s);
  const double tol = kScoreTieTolerance * std::max(1.0, std::fabs(extreme));
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (std::fabs(scores[k] - extreme) <= tol) return k;
  }
  return 0;
}

}  // namespace

double expected_measure_after(const PosteriorState& state, std::span<const Side> sides,
                              double p_hat) {
  auto [a_i, a_j] = predictive(state, sides, p_hat);
  return state.total_measure() * (a_i * a_i + a_j * a_j);
}

double expected_measure_gain(const PosteriorState& state, std::span<const Side> sides,
                             double p_hat) {
  auto [a_i, a_j] = predictive(state, sides, p_hat);
  // Z - Z (a_i^2 + a_j^2) with a_i + a_j = 1.
  return state.total_measure() * 2.0 * a_i * a_j;
}

std::optional<QueryPair> merr_select(const PosteriorState& state, HalfspaceCache& cache,
                                     int current, double p_hat) {
  return merr_select(state, cache, current, [p_hat](int, int) { return p_hat; });
}

std::optional<QueryPair> merr_select(const PosteriorState& state, HalfspaceCache& cache,
                                     int current, const PairAccuracy& p_hat) {
  const std::size_t n = cache.regions().size();
  if (state.size() != n) throw InputError("posterior does not cover the region set");
  std::vector<char> live(n);
  for (std::size_t r = 0; r < n; ++r) live[r] = state.live(r) ? 1 : 0;

  std::vector<int> pool;
  for (int j : candidates(n, current, live)) {
    if (!cache.degenerate(current, j)) pool.push_back(j);
  }
  if (pool.empty()) return std::nullopt;

  // Sum q is common to every candidate, so rank on the normalised predictive
  // mass; this survives q underflowing after long sessions.
  std::vector<double> normalised;
  normalised.reserve(pool.size());
  for (int j : pool) {
    auto [a_i, a_j] = predictive(state, cache.sides(current, j), p_hat(current, j));
    normalised.push_back(a_i * a_i + a_j * a_j);
  }
  const std::size_t k = pick(normalised, false);
  return QueryPair{current, pool[k], SelectorKind::Merr, state.total_measure() * normalised[k]};
}

double logistic_of_negated(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

MvrModel::MvrModel(const RegionSet& regions, double beta)
    : regions_(&regions), beta_(beta), samples_(regions.samples().size()) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be positive");
  if (samples_ == 0) throw InputError("mass table is empty");
  costs_.resize(regions.size() * samples_);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const PathRecord& path = regions[r].canonical_path;
    for (std::size_t s = 0; s < samples_; ++s) {
      costs_[r * samples_ + s] = path_cost(path, regions.samples()[s]);
    }
  }
  log_mass_.assign(samples_, 0.0);
}

std::vector<double> MvrModel::masses() const {
  const double top = *std::max_element(log_mass_.begin(), log_mass_.end());
  std::vector<double> m(samples_);
  double total = 0.0;
  for (std::size_t s = 0; s < samples_; ++s) {
    m[s] = std::exp(log_mass_[s] - top);
    total += m[s];
  }
  for (double& v : m) v /= total;
  return m;
}

double MvrModel::prefer_i(int i, int j, std::size_t sample) const {
  return logistic_of_negated(beta_ * (cost(i, sample) - cost(j, sample)));
}

double MvrModel::score(int current, int candidate) const {
  return score(masses(), current, candidate);
}

double MvrModel::score(std::span<const double> mass, int current, int candidate) const {
  double total = 0.0;
  double keep_i = 0.0;  // sum of mass * f_i
  for (std::size_t s = 0; s < samples_; ++s) {
    total += mass[s];
    keep_i += mass[s] * prefer_i(current, candidate, s);
  }
  const double keep_j = total - keep_i;
  const double p_i = keep_i / total;
  const double p_j = keep_j / total;
  // Answer i removes mass * (1 - f_i) = mass * f_j, and vice versa.
  return p_i * keep_j + p_j * keep_i;
}

void MvrModel::update(int i, int j, Choice choice) {
  for (std::size_t s = 0; s < samples_; ++s) {
    const double x = beta_ * (cost(i, s) - cost(j, s));
    // log f_i = -log(1 + e^x), log f_j = -log(1 + e^-x)
    const double y = choice == Choice::I ? x : -x;
    const double log_f = y > 0.0 ? -(y + std::log1p(std::exp(-y))) : -std::log1p(std::exp(y));
    log_mass_[s] += log_f;
  }
}

std::optional<QueryPair> mvr_select(const MvrModel& model, int current,
                                    std::span<const char> eligible) {
  auto pool = candidates(model.region_count(), current, eligible);
  if (pool.empty()) return std::nullopt;
  const auto mass = model.masses();
  std::vector<double> scores;
  scores.reserve(pool.size());
  for (int j : pool) scores.push_back(model.score(mass, current, j));
  const std::size_t k = pick(scores, true);
  return QueryPair{current, pool[k], SelectorKind::Mvr, scores[k]};
}

std::optional<QueryPair> random_select(std::size_t region_count, int current,
                                       std::mt19937_64& rng, std::span<const char> eligible) {
  auto pool = candidates(region_count, current, eligible);
  if (pool.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
  return QueryPair{current, pool[dist(rng)], SelectorKind::Random, 0.0};
}

}  // namespace pathpref
