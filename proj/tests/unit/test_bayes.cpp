#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "instances.hpp"
#include "pathpref/bayes.hpp"
#include "pathpref/errors.hpp"

using namespace pathpref;
namespace ts = pathpref::testsupport;

namespace {

Observation obs(int i, int j, Choice c, double p = 0.9) {
  return Observation{i, j, c, p, 0};
}

struct TwoRegions {
  ts::SmallInstance inst = ts::two_route_instance(10.0, 5.0, 10.0);
  RegionSet rs = sample_regions(inst.graph, inst.constraints, inst.task, 500, 3);
};

// Random observation log over live pairs of a sampled instance.
ObservationLog random_log(const RegionSet& rs, HalfspaceCache& cache, std::mt19937_64& rng,
                          std::size_t length, double p_hat) {
  ObservationLog log;
  std::uniform_int_distribution<int> pick(0, int(rs.size()) - 1);
  while (log.size() < length) {
    const int i = pick(rng);
    const int j = pick(rng);
    if (i == j || cache.degenerate(i, j)) continue;
    log.append(obs(i, j, rng() % 2 ? Choice::I : Choice::J, p_hat));
  }
  return log;
}

}  // namespace

TEST(RegionLikelihood, CasesOfTheObservationModel) {
  EXPECT_DOUBLE_EQ(region_likelihood(obs(0, 1, Choice::I), Side::InsideIJ), 0.9);
  EXPECT_NEAR(region_likelihood(obs(0, 1, Choice::J), Side::InsideIJ), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(region_likelihood(obs(0, 1, Choice::J), Side::InsideJI), 0.9);
  EXPECT_DOUBLE_EQ(region_likelihood(obs(0, 1, Choice::I), Side::Mixed), 0.5);
  EXPECT_DOUBLE_EQ(region_likelihood(obs(0, 1, Choice::J), Side::Mixed), 0.5);
}

TEST(RegionLikelihood, AccuracyOutsideRangeIsRejected) {
  EXPECT_THROW(region_likelihood(obs(0, 1, Choice::I, 0.5), Side::Mixed), InputError);
  EXPECT_THROW(region_likelihood(obs(0, 1, Choice::I, 1.2), Side::Mixed), InputError);
}

TEST(UpdatePosterior, DecisiveObservationOnTwoEqualRegions) {
  TwoRegions t;
  HalfspaceCache cache(t.rs);
  auto state = PosteriorState::for_regions(t.rs, PriorKind::Uniform);
  state = update_posterior(state, obs(0, 1, Choice::I), cache);
  EXPECT_NEAR(state.probability(0), 0.9, 1e-12);
  EXPECT_NEAR(state.probability(1), 0.1, 1e-12);
  EXPECT_NEAR(state.total_measure(), 0.5, 1e-12);
  EXPECT_NEAR(total_measure_deficit(state), 0.5, 1e-12);
}

TEST(UpdatePosterior, AllMixedObservationLeavesProbabilitiesAndHalvesMeasure) {
  PosteriorState state({0.2, 0.3, 0.5});
  const std::vector<double> half(3, 0.5);
  state.multiply(half);
  EXPECT_NEAR(state.probability(0), 0.2, 1e-15);
  EXPECT_NEAR(state.probability(2), 0.5, 1e-15);
  EXPECT_NEAR(state.total_measure(), 0.5, 1e-15);
  EXPECT_NEAR(total_measure_deficit(state), 0.5, 1e-15);
}

TEST(TotalMeasureDeficit, ZeroBeforeAnyObservation) {
  EXPECT_DOUBLE_EQ(total_measure_deficit(PosteriorState({1.0, 1.0, 2.0})), 0.0);
}

TEST(UpdatePosterior, TwoRegionClosedForm) {
  TwoRegions t;
  HalfspaceCache cache(t.rs);
  for (double p : {0.6, 0.75, 0.9, 0.99}) {
    for (int n = 0; n <= 50; ++n) {
      for (int k = 0; k <= n; ++k) {
        auto state = PosteriorState::for_regions(t.rs, PriorKind::Uniform);
        // k answers favour region 1 (choice J for the pair (0, 1)).
        for (int m = 0; m < n; ++m) {
          state = update_posterior(state, obs(0, 1, m < k ? Choice::J : Choice::I, p), cache);
        }
        const double expected = 1.0 / (1.0 + std::pow(p / (1.0 - p), n - 2 * k));
        ASSERT_NEAR(state.probability(1), expected, 1e-12) << "p=" << p << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(UpdatePosterior, SequentialEqualsBatchProduct) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto si = ts::random_sampled_instance(rng, 2, 8, 300);
    HalfspaceCache cache(si.regions);
    const double p = std::uniform_real_distribution<double>(0.55, 0.99)(rng);
    const auto log = random_log(si.regions, cache, rng, 1 + rng() % 40, p);
    auto seq = PosteriorState::for_regions(si.regions, PriorKind::SupportProportional);
    for (const auto& o : log) seq = update_posterior(seq, o, cache);

    std::vector<double> batch(si.regions.size());
    double total_support = 0.0;
    for (const auto& r : si.regions) total_support += double(r.support_count());
    for (std::size_t r = 0; r < batch.size(); ++r) {
      double q = double(si.regions[r].support_count()) / total_support;
      for (const auto& o : log) {
        q *= ts::answer_likelihood(ts::side_by_costs(si.regions, int(r), o.path_i, o.path_j),
                                   o.choice, p);
      }
      batch[r] = q;
    }
    const double z = std::accumulate(batch.begin(), batch.end(), 0.0);
    double sum = 0.0;
    for (std::size_t r = 0; r < batch.size(); ++r) {
      ASSERT_NEAR(seq.probability(r), batch[r] / z, 1e-12);
      ASSERT_NEAR(seq.measure(r), batch[r], 1e-12);
      sum += seq.probability(r);
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(UpdatePosterior, OrderOfObservationsDoesNotMatter) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    auto si = ts::random_sampled_instance(rng, 3, 8, 300);
    HalfspaceCache cache(si.regions);
    auto log = random_log(si.regions, cache, rng, 20, 0.8);
    std::vector<Observation> shuffled(log.begin(), log.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ObservationLog other;
    for (const auto& o : shuffled) other.append(o);
    const auto a = replay(si.regions, PriorKind::Uniform, log);
    const auto b = replay(si.regions, PriorKind::Uniform, other);
    for (std::size_t r = 0; r < si.regions.size(); ++r) {
      EXPECT_NEAR(a.probability(r), b.probability(r), 1e-12);
    }
  }
}

TEST(UpdatePosterior, CertainAccuracyZeroesContradictedRegions) {
  TwoRegions t;
  HalfspaceCache cache(t.rs);
  auto state = PosteriorState::for_regions(t.rs, PriorKind::Uniform);
  state = update_posterior(state, obs(0, 1, Choice::J, 1.0), cache);
  EXPECT_EQ(state.probability(0), 0.0);
  EXPECT_EQ(state.probability(1), 1.0);
  EXPECT_FALSE(state.live(0));
  // A later favourable answer does not bring region 0 back.
  state = update_posterior(state, obs(0, 1, Choice::J, 0.9), cache);
  EXPECT_EQ(state.probability(0), 0.0);
}

TEST(UpdatePosterior, ContradictionLeavesStateUnchanged) {
  TwoRegions t;
  HalfspaceCache cache(t.rs);
  auto state = PosteriorState::for_regions(t.rs, PriorKind::Uniform);
  state = update_posterior(state, obs(0, 1, Choice::J, 1.0), cache);
  const auto before = state.probabilities();
  EXPECT_THROW(state = update_posterior(state, obs(0, 1, Choice::I, 1.0), cache),
               ContradictoryFeedbackError);
  EXPECT_EQ(state.probabilities(), before);
}

TEST(PosteriorState, LongSessionsDoNotUnderflow) {
  PosteriorState state({1.0, 1.0});
  const std::vector<double> lik{0.1, 0.9};
  for (int n = 0; n < 2000; ++n) state.multiply(lik);
  EXPECT_TRUE(std::isfinite(state.probability(0)));
  EXPECT_NEAR(state.probability(1), 1.0, 1e-12);
  EXPECT_GT(state.measure(0), 0.0);
  EXPECT_TRUE(state.live(0));
}

TEST(PosteriorState, RejectsBadPriors) {
  EXPECT_THROW(PosteriorState(std::vector<double>{}), InputError);
  EXPECT_THROW(PosteriorState({-1.0, 2.0}), InputError);
  EXPECT_THROW(PosteriorState({0.0, 0.0}), InputError);
}

TEST(BestRegion, HighestPosteriorWithLowestIdOnTies) {
  TwoRegions t;
  auto a = PosteriorState({0.3, 0.7});
  EXPECT_EQ(best_region(a, t.rs).region, 1);
  EXPECT_EQ(best_region(a, t.rs).weight, t.rs[1].representative_weight());
  EXPECT_EQ(best_region(PosteriorState({0.5, 0.5}), t.rs).region, 0);
}

TEST(Replay, ReproducesSequentialUpdates) {
  std::mt19937_64 rng(41);
  auto si = ts::random_sampled_instance(rng, 3, 8, 300);
  HalfspaceCache cache(si.regions);
  auto log = random_log(si.regions, cache, rng, 30, 0.85);
  auto state = PosteriorState::for_regions(si.regions, PriorKind::Uniform);
  for (const auto& o : log) state = update_posterior(state, o, cache);
  const auto again = replay(si.regions, PriorKind::Uniform, log);
  EXPECT_EQ(again.probabilities(), state.probabilities());
}

TEST(PosteriorState, SupportProportionalPrior) {
  TwoRegions t;
  auto state = PosteriorState::for_regions(t.rs, PriorKind::SupportProportional);
  const double total = double(t.rs[0].support_count() + t.rs[1].support_count());
  EXPECT_NEAR(state.probability(0), double(t.rs[0].support_count()) / total, 1e-15);
}
