#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "pathpref/bayes.hpp"
#include "pathpref/graph.hpp"
#include "pathpref/regions.hpp"

namespace pathpref {

enum class UserModel { MerrConstant, MvrLogistic };

std::string_view to_string(UserModel model);
UserModel user_model_from_string(std::string_view name);

/// Simulated feedback source with hidden weights.
struct SimulatedUser {
  UserModel model = UserModel::MerrConstant;
  WeightVector true_weight;
  double accuracy = 0.9;  // p, merr_constant only
  double beta = 1.0;      // 1/seconds, mvr_logistic only
  std::mt19937_64 rng;

  SimulatedUser(UserModel model, WeightVector true_weight, double accuracy_or_beta,
                std::uint64_t seed);
};

/// With probability p picks the path that is cheaper under the true weight;
/// exact cost ties are a fair coin.
Choice merr_user_respond(const PathRecord& path_i, const PathRecord& path_j, SimulatedUser& user);

/// Picks path i with probability 1 / (1 + exp(beta * (C_i - C_j))).
Choice mvr_user_respond(const PathRecord& path_i, const PathRecord& path_j, SimulatedUser& user);

/// Dispatches on user.model.
Choice user_respond(const PathRecord& path_i, const PathRecord& path_j, SimulatedUser& user);

/// Pairs of regions used to measure a logistic user's accuracy.
using RegionPanel = std::vector<std::pair<int, int>>;

/// `size` random pairs of distinct regions. Needs at least two regions.
RegionPanel draw_panel(const RegionSet& regions, std::size_t size, std::uint64_t seed);

/// Mean probability, over the panel, that a logistic user with this beta picks
/// the cheaper path of each pair (1/2 on exact ties). Nondecreasing in beta.
double panel_accuracy(const RegionSet& regions, const RegionPanel& panel,
                      const WeightVector& true_weight, double beta);

struct BetaCalibration {
  double beta = 0.0;
  double accuracy = 0.0;  // on the calibration panel
};

/// Bisection on beta until the panel accuracy is within tolerance of the
/// target. Throws CalibrationError when the panel cannot reach the target,
/// e.g. when every pair ties under the true weight.
BetaCalibration calibrate_beta(const RegionSet& regions, const RegionPanel& panel,
                               const WeightVector& true_weight, double target_accuracy,
                               double tolerance);

/// Default panel size for calibration and for the held-out check.
inline constexpr std::size_t kCalibrationPanelSize = 200;

}  // namespace pathpref
