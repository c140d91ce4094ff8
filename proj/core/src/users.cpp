#include "pathpref/users.hpp"

#include <cmath>

#include "pathpref/errors.hpp"
#include "pathpref/query_select.hpp"

namespace pathpref {

std::string_view to_string(UserModel model) {
  return model == UserModel::MerrConstant ? "merr_constant" : "mvr_logistic";
}

UserModel user_model_from_string(std::string_view name) {
  if (name == "merr_constant") return UserModel::MerrConstant;
  if (name == "mvr_logistic") return UserModel::MvrLogistic;
  throw InputError("unknown user model '" + std::string(name) + "'");
}

SimulatedUser::SimulatedUser(UserModel m, WeightVector w, double accuracy_or_beta,
                             std::uint64_t seed)
    : model(m), true_weight(std::move(w)), rng(seed) {
  if (model == UserModel::MerrConstant) {
    if (!(accuracy_or_beta > 0.5 && accuracy_or_beta <= 1.0)) {
      throw InputError("user accuracy must lie in (0.5, 1]");
    }
    accuracy = accuracy_or_beta;
  } else {
    if (!(accuracy_or_beta > 0.0) || !std::isfinite(accuracy_or_beta)) {
      throw InputError("user beta must be positive");
    }
    beta = accuracy_or_beta;
  }
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

Choice merr_user_respond(const PathRecord& path_i, const PathRecord& path_j, SimulatedUser& user) {
  if (user.model != UserModel::MerrConstant) throw InputError("user is not a merr_constant user");
  const double ci = path_cost(path_i, user.true_weight);
  const double cj = path_cost(path_j, user.true_weight);
  const double u = uniform01(user.rng);
  if (ci == cj) return u < 0.5 ? Choice::I : Choice::J;
  const Choice correct = ci < cj ? Choice::I : Choice::J;
  const Choice wrong = correct == Choice::I ? Choice::J : Choice::I;
  return u < user.accuracy ? correct : wrong;
}

Choice mvr_user_respond(const PathRecord& path_i, const PathRecord& path_j, SimulatedUser& user) {
  if (user.model != UserModel::MvrLogistic) throw InputError("user is not an mvr_logistic user");
  const double delta = path_cost(path_i, user.true_weight) - path_cost(path_j, user.true_weight);
  const double prob_i = logistic_of_negated(user.beta * delta);
  return uniform01(user.rng) < prob_i ? Choice::I : Choice::J;
}

Choice user_respond(const PathRecord& path_i, const PathRecord& path_j, SimulatedUser& user) {
  return user.model == UserModel::MerrConstant ? merr_user_respond(path_i, path_j, user)
                                               : mvr_user_respond(path_i, path_j, user);
}

RegionPanel draw_panel(const RegionSet& regions, std::size_t size, std::uint64_t seed) {
  if (regions.size() < 2) throw CalibrationError("calibration needs at least two regions");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(regions.size()) - 1);
  RegionPanel panel;
  panel.reserve(size);
  while (panel.size() < size) {
    int a = pick(rng);
    int b = pick(rng);
    if (a != b) panel.emplace_back(a, b);
  }
  return panel;
}

double panel_accuracy(const RegionSet& regions, const RegionPanel& panel,
                      const WeightVector& true_weight, double beta) {
  if (panel.empty()) throw CalibrationError("empty calibration panel");
  double total = 0.0;
  for (auto [a, b] : panel) {
    const double delta =
        std::fabs(path_cost(regions[static_cast<std::size_t>(a)].canonical_path, true_weight) -
                  path_cost(regions[static_cast<std::size_t>(b)].canonical_path, true_weight));
    total += logistic_of_negated(-beta * delta);
  }
  return total / static_cast<double>(panel.size());
}

BetaCalibration calibrate_beta(const RegionSet& regions, const RegionPanel& panel,
                               const WeightVector& true_weight, double target_accuracy,
                               double tolerance) {
  if (!(target_accuracy >= 0.5 && target_accuracy < 1.0)) {
    throw CalibrationError("target accuracy must lie in [0.5, 1)");
  }
  if (target_accuracy - 0.5 <= tolerance) return {0.0, 0.5};

  // Accuracy at beta -> infinity: 1 for every decisive pair, 1/2 for ties.
  std::size_t ties = 0;
  for (auto [a, b] : panel) {
    if (path_cost(regions[static_cast<std::size_t>(a)].canonical_path, true_weight) ==
        path_cost(regions[static_cast<std::size_t>(b)].canonical_path, true_weight)) {
      ++ties;
    }
  }
  const double ceiling =
      1.0 - 0.5 * static_cast<double>(ties) / static_cast<double>(panel.size());
  if (ceiling < target_accuracy - tolerance) {
    throw CalibrationError("target accuracy unreachable on this panel (ceiling " +
                           std::to_string(ceiling) + ")");
  }

  double lo = 0.0;
  double hi = 1e-3;
  while (panel_accuracy(regions, panel, true_weight, hi) < target_accuracy) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  double beta = hi;
  double acc = panel_accuracy(regions, panel, true_weight, hi);
  for (int it = 0; it < 200 && std::fabs(acc - target_accuracy) > tolerance / 8.0; ++it) {
    beta = 0.5 * (lo + hi);
    acc = panel_accuracy(regions, panel, true_weight, beta);
    if (acc < target_accuracy) {
      lo = beta;
    } else {
      hi = beta;
    }
  }
  if (std::fabs(acc - target_accuracy) > tolerance) {
    throw CalibrationError("bisection did not reach the target accuracy");
  }
  return {beta, acc};
}

}  // namespace pathpref
