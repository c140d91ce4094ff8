#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "instances.hpp"
#include "pathpref/errors.hpp"
#include "pathpref/session.hpp"

using namespace pathpref;
namespace ts = pathpref::testsupport;

namespace {

Scenario two_route_scenario() {
  return ts::as_scenario(ts::two_route_instance(10.0, 5.0, 10.0), "two-route");
}

SessionConfig config(int budget, double p_hat = 0.9) {
  SessionConfig c;
  c.budget = budget;
  c.assumed_accuracy = p_hat;
  c.sample_count = 500;
  return c;
}

}  // namespace

TEST(Session, StartsAtTheUpperCornerPath) {
  const auto s = two_route_scenario();
  Session session(s, 0, config(5), 1);
  // At w = 10 the clean route A wins.
  EXPECT_EQ(session.current_path().edges, (std::vector<EdgeId>{0}));
  EXPECT_EQ(session.current_weight(), s.constraints.upper_corner());
  ASSERT_TRUE(session.pending().has_value());
  EXPECT_EQ(session.pending()->current, session.current_region());
}

TEST(Session, InitialPathAvoidsZonesWhenADetourExists) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = ts::random_instance(rng, 4, 10, 3, 8);
    const auto s = ts::as_scenario(inst);
    Session session(s, 0, config(1), 3);
    const auto paths = enumerate_paths(s.graph, s.constraints, s.tasks[0], 200000);
    const auto best = ts::enumeration_optimum(paths, s.constraints.upper_corner());
    EXPECT_EQ(session.current_path().edges, paths[best].edges);
    // A clean path cheaper than any penalised one must be chosen.
    int min_violations = 1 << 30;
    for (const auto& p : paths) {
      int v = 0;
      for (int x : p.violations) v += x;
      min_violations = std::min(min_violations, v);
    }
    if (min_violations == 0) {
      const auto& phi = session.current_path().violations;
      const bool clean = std::all_of(phi.begin(), phi.end(), [](int x) { return x == 0; });
      double clean_time = 1e300;
      for (const auto& p : paths) {
        if (std::all_of(p.violations.begin(), p.violations.end(), [](int x) { return x == 0; })) {
          clean_time = std::min(clean_time, p.time);
        }
      }
      double min_penalty = 1e300;
      for (const auto& c : s.constraints.constraints()) min_penalty = std::min(min_penalty, c.weight_hi);
      double fastest = 1e300;
      for (const auto& p : paths) fastest = std::min(fastest, p.time);
      if (clean_time < fastest + min_penalty) EXPECT_TRUE(clean);
    }
  }
}

TEST(Session, OneRegionConvergesByVacuity) {
  std::vector<Vertex> vs{{0, {}, {}}, {1, {}, {}}};
  std::vector<Edge> es{{0, 0, 1, 2.0}, {1, 1, 0, 2.0}};
  EnvironmentGraph g("line", vs, es);
  Scenario s;
  s.graph = g;
  s.constraints = ConstraintSet(g, {{0, ConstraintKind::Avoid, {0}, 0.0, 5.0, {}}});
  s.tasks = {{0, 1}};
  Session session(s, 0, config(10), 1);
  EXPECT_TRUE(session.converged_by_vacuity());
  EXPECT_TRUE(session.finished());
  EXPECT_EQ(session.stop_reason(), StopReason::NothingToAsk);
  EXPECT_EQ(session.best().region, 0);
}

TEST(Session, SameSeedSameState) {
  std::mt19937_64 rng(89);
  auto s = ts::as_scenario(ts::random_instance(rng, 6, 10, 3, 8));
  SessionConfig c = config(20);
  c.selector = SelectorKind::Random;
  Session a(s, 0, c, 42);
  Session b(s, 0, c, 42);
  EXPECT_EQ(a.regions().assignment(), b.regions().assignment());
  while (!a.finished()) {
    ASSERT_EQ(a.pending()->proposed, b.pending()->proposed);
    a.step(Choice::J);
    b.step(Choice::J);
  }
  EXPECT_EQ(a.posterior().probabilities(), b.posterior().probabilities());
}

TEST(Session, PreferringCurrentKeepsItAndStillUpdates) {
  Session session(two_route_scenario(), 0, config(5), 1);
  const int before = session.current_region();
  session.step(Choice::I);
  EXPECT_EQ(session.current_region(), before);
  EXPECT_NEAR(session.posterior().probability(before), 0.9, 1e-12);
  EXPECT_EQ(session.log().size(), 1u);
  EXPECT_EQ(session.iteration(), 1);
}

TEST(Session, PreferringNewPromotesTheProposal) {
  Session session(two_route_scenario(), 0, config(5), 1);
  const int proposed = session.pending()->proposed;
  session.step(Choice::J);
  EXPECT_EQ(session.current_region(), proposed);
  EXPECT_EQ(session.current_weight(), session.regions()[proposed].representative_weight());
}

TEST(Session, BudgetReachedRefusesFurtherFeedback) {
  Session session(two_route_scenario(), 0, config(2), 1);
  session.step(Choice::I);
  session.step(Choice::I);
  EXPECT_EQ(session.stop_reason(), StopReason::Budget);
  EXPECT_THROW(session.step(Choice::I), BudgetExhaustedError);
  EXPECT_EQ(session.result().executed(), 2);
}

TEST(Session, ThresholdStopsEarly) {
  SessionConfig c = config(50);
  c.stop_threshold = 0.95;
  Session session(two_route_scenario(), 0, c, 1);
  while (!session.finished()) session.step(Choice::I);
  EXPECT_EQ(session.stop_reason(), StopReason::Threshold);
  EXPECT_LT(session.iteration(), 50);
}

TEST(Session, InformativeCountsSkipMixedRegions) {
  std::mt19937_64 rng(97);
  auto si = ts::random_sampled_instance(rng, 4, 10, 300);
  auto regions = std::make_shared<const RegionSet>(si.regions);
  Session session(regions, config(10), 5);
  std::vector<int> expected(regions->size(), 0);
  HalfspaceCache cache(*regions);
  while (!session.finished()) {
    const auto q = *session.pending();
    const auto& sides = cache.sides(q.current, q.proposed);
    for (std::size_t r = 0; r < sides.size(); ++r) expected[r] += sides[r] != Side::Mixed;
    session.step(rng() % 2 ? Choice::I : Choice::J);
  }
  EXPECT_EQ(session.informative_counts(), expected);
}

TEST(RunSession, CertainUserOnTwoRegionsConvergesInOneQuery) {
  const auto s = two_route_scenario();
  for (double w : {2.0, 8.0}) {
    SimulatedUser user(UserModel::MerrConstant, WeightVector{w}, 1.0, 3);
    const auto res = run_session(s, 0, user, config(1, 1.0), 7);
    ASSERT_TRUE(res.true_region.has_value());
    EXPECT_EQ(res.true_trajectory.back(), 1.0);
    EXPECT_EQ(res.best.region, *res.true_region);
  }
}

TEST(RunSession, ZeroBudgetReturnsPriorArgmax) {
  const auto s = two_route_scenario();
  SimulatedUser user(UserModel::MerrConstant, WeightVector{2.0}, 0.9, 3);
  const auto res = run_session(s, 0, user, config(0), 7);
  EXPECT_EQ(res.trajectory.size(), 1u);
  EXPECT_EQ(res.best.region, 0);
  EXPECT_EQ(res.stop, StopReason::Budget);
}

TEST(RunSession, TrajectoryShapeAndReplayDeterminism) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    auto si = ts::random_sampled_instance(rng, 3, 10, 400);
    auto regions = std::make_shared<const RegionSet>(si.regions);
    for (auto sel : {SelectorKind::Merr, SelectorKind::Mvr, SelectorKind::Random}) {
      SessionConfig c = config(25, 0.8);
      c.selector = sel;
      Session session(regions, c, 11);
      const auto w = regions->samples()[rng() % regions->samples().size()];
      SimulatedUser user(UserModel::MerrConstant, w, 0.8, rng());
      const auto res = run_session(session, user, std::nullopt);
      EXPECT_EQ(res.trajectory.size(), std::size_t(res.executed()) + 1);
      EXPECT_EQ(res.current_regions.size(), res.trajectory.size());
      for (const auto& o : res.log) {
        EXPECT_TRUE(o.path_i == res.current_regions[o.iteration - 1]);
      }
      const auto again = replay(*regions, c.prior, res.log);
      EXPECT_EQ(again.probabilities(), res.final_posterior);
    }
  }
}

TEST(RunSession, CertainFeedbackNeverResurrectsARegion) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    auto si = ts::random_sampled_instance(rng, 3, 8, 400);
    auto regions = std::make_shared<const RegionSet>(si.regions);
    Session session(regions, config(30, 1.0), 1);
    const auto w = regions->samples()[rng() % regions->samples().size()];
    SimulatedUser user(UserModel::MerrConstant, w, 1.0, 2);
    const auto res = run_session(session, user, std::nullopt);
    for (std::size_t r = 0; r < regions->size(); ++r) {
      bool dead = false;
      for (const auto& row : res.trajectory) {
        if (dead) EXPECT_EQ(row[r], 0.0);
        dead = dead || row[r] == 0.0;
      }
    }
  }
}

TEST(RegionOfWeight, FindsTheSampledRegion) {
  const auto s = two_route_scenario();
  auto rs = sample_regions(s.graph, s.constraints, s.tasks[0], 500, 1);
  EXPECT_EQ(region_of_weight(s, 0, rs, WeightVector{9.0}), 0);
  EXPECT_EQ(region_of_weight(s, 0, rs, WeightVector{1.0}), 1);
}

TEST(SessionConfig, RejectsBadSettings) {
  const auto s = two_route_scenario();
  EXPECT_THROW(Session(s, 0, config(-1), 1), InputError);
  EXPECT_THROW(Session(s, 0, config(5, 0.4), 1), InputError);
}
