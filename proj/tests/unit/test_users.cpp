#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "instances.hpp"
#include "pathpref/errors.hpp"
#include "pathpref/scenarios.hpp"
#include "pathpref/users.hpp"

using namespace pathpref;
namespace ts = pathpref::testsupport;

namespace {

PathRecord features(std::vector<int> phi, double t) {
  PathRecord p;
  p.violations = std::move(phi);
  p.time = t;
  return p;
}

double fraction_i(const PathRecord& a, const PathRecord& b, SimulatedUser& u, int draws) {
  int hits = 0;
  for (int n = 0; n < draws; ++n) hits += user_respond(a, b, u) == Choice::I;
  return double(hits) / draws;
}

}  // namespace

TEST(MerrUser, CertainUserAlwaysPicksTheCheaperPath) {
  SimulatedUser u(UserModel::MerrConstant, WeightVector{2.0}, 1.0, 5);
  const auto cheap = features({1}, 3.0);   // 5
  const auto dear = features({0}, 6.0);    // 6
  for (int n = 0; n < 1000; ++n) {
    ASSERT_EQ(merr_user_respond(cheap, dear, u), Choice::I);
    ASSERT_EQ(merr_user_respond(dear, cheap, u), Choice::J);
  }
}

TEST(MerrUser, EqualCostsAreAFairCoin) {
  SimulatedUser u(UserModel::MerrConstant, WeightVector{1.0}, 0.9, 7);
  EXPECT_NEAR(fraction_i(features({1}, 4.0), features({0}, 5.0), u, 10000), 0.5, 0.02);
}

TEST(MerrUser, BernoulliWithParameterP) {
  SimulatedUser u(UserModel::MerrConstant, WeightVector{1.0}, 0.9, 11);
  const int draws = 10000;
  const double f = fraction_i(features({0}, 4.0), features({0}, 5.0), u, draws);
  const double sigma = std::sqrt(0.9 * 0.1 / draws);
  EXPECT_NEAR(f, 0.9, 0.01);
  EXPECT_NEAR(f, 0.9, 3 * sigma);
}

TEST(MerrUser, DeterministicGivenSeed) {
  SimulatedUser a(UserModel::MerrConstant, WeightVector{1.0}, 0.7, 3);
  SimulatedUser b(UserModel::MerrConstant, WeightVector{1.0}, 0.7, 3);
  for (int n = 0; n < 200; ++n) {
    EXPECT_EQ(user_respond(features({0}, 1.0), features({1}, 1.0), a),
              user_respond(features({0}, 1.0), features({1}, 1.0), b));
  }
}

TEST(MerrUser, RejectsAccuracyOutsideRange) {
  EXPECT_THROW(SimulatedUser(UserModel::MerrConstant, WeightVector{1.0}, 0.5, 1), InputError);
  EXPECT_THROW(SimulatedUser(UserModel::MvrLogistic, WeightVector{1.0}, 0.0, 1), InputError);
}

TEST(MvrUser, ZeroCostGapIsHalf) {
  SimulatedUser u(UserModel::MvrLogistic, WeightVector{1.0}, 3.0, 13);
  EXPECT_NEAR(fraction_i(features({1}, 4.0), features({0}, 5.0), u, 10000), 0.5, 0.02);
}

TEST(MvrUser, VanishingBetaIsHalfForAnyPair) {
  SimulatedUser u(UserModel::MvrLogistic, WeightVector{1.0}, 1e-9, 17);
  EXPECT_NEAR(fraction_i(features({0}, 1.0), features({0}, 50.0), u, 10000), 0.5, 0.02);
}

TEST(MvrUser, LargeBetaIsAlmostAlwaysRight) {
  SimulatedUser u(UserModel::MvrLogistic, WeightVector{1.0}, 1e3, 19);
  EXPECT_GT(fraction_i(features({0}, 4.0), features({0}, 5.0), u, 10000), 0.999);
}

TEST(MvrUser, MatchesLogisticProbability) {
  SimulatedUser u(UserModel::MvrLogistic, WeightVector{1.0}, 0.5, 23);
  const double expected = 1.0 / (1.0 + std::exp(0.5 * (4.0 - 6.0)));
  EXPECT_NEAR(fraction_i(features({0}, 4.0), features({0}, 6.0), u, 20000), expected, 0.015);
}

TEST(Calibration, TargetHalfGivesZeroBeta) {
  auto inst = ts::two_route_instance(10.0, 5.0, 10.0);
  auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 200, 1);
  auto panel = draw_panel(rs, 50, 1);
  EXPECT_NEAR(calibrate_beta(rs, panel, WeightVector{3.0}, 0.5, 0.02).beta, 0.0, 1e-12);
}

TEST(Calibration, PanelAccuracyIsMonotoneInBeta) {
  std::mt19937_64 rng(71);
  auto si = ts::random_sampled_instance(rng, 4, 20, 500);
  auto panel = draw_panel(si.regions, 100, 2);
  const auto w = si.regions.samples()[7];
  double last = 0.0;
  for (double beta = 0.0; beta < 20.0; beta += 0.25) {
    const double acc = panel_accuracy(si.regions, panel, w, beta);
    EXPECT_GE(acc, last - 1e-15);
    last = acc;
  }
}

TEST(Calibration, DegeneratePanelIsCalibrationError) {
  // Both regions cost the same at w = 5, so every panel pair ties.
  auto inst = ts::two_route_instance(10.0, 5.0, 10.0);
  auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 200, 1);
  auto panel = draw_panel(rs, 20, 1);
  EXPECT_THROW(calibrate_beta(rs, panel, WeightVector{5.0}, 0.9, 0.02), CalibrationError);
}

TEST(Calibration, ReproducesTargetOnHeldOutPanel) {
  const auto build = build_grid_preset("spec-A", 1);
  const auto& s = build.scenario;
  auto rs = sample_regions(s.graph, s.constraints, s.tasks[0], 1000, 3);
  ASSERT_GE(rs.size(), 2u);
  const auto w = rs.samples()[11];
  auto train = draw_panel(rs, kCalibrationPanelSize, 100);
  auto held = draw_panel(rs, kCalibrationPanelSize, 200);
  const auto cal = calibrate_beta(rs, train, w, 0.9, 0.02);
  EXPECT_NEAR(cal.accuracy, 0.9, 0.02);
  EXPECT_NEAR(panel_accuracy(rs, held, w, cal.beta), 0.9, 0.02);
}

TEST(UserModel, NamesRoundTrip) {
  for (auto m : {UserModel::MerrConstant, UserModel::MvrLogistic}) {
    EXPECT_EQ(user_model_from_string(to_string(m)), m);
  }
  EXPECT_THROW(user_model_from_string("oracle"), InputError);
}
