#include <gtest/gtest.h>

#include <random>
#include <set>

#include "instances.hpp"
#include "pathpref/errors.hpp"
#include "pathpref/regions.hpp"

using namespace pathpref;
namespace ts = pathpref::testsupport;

namespace {

PathRecord features(std::vector<int> phi, double t) {
  PathRecord p;
  p.violations = std::move(phi);
  p.time = t;
  return p;
}

EquivalenceRegion region_with(std::vector<WeightVector> support) {
  EquivalenceRegion r;
  r.support = std::move(support);
  return r;
}

}  // namespace

TEST(Halfspace, DirectArithmetic) {
  const auto h = halfspace_from_pair(features({1, 0}, 7.0), features({0, 2}, 4.0));
  EXPECT_EQ(h.normal, (std::vector<double>{1.0, -2.0}));
  EXPECT_DOUBLE_EQ(h.offset, -3.0);
}

TEST(Halfspace, SameFeaturesFasterPathCoversTheBox) {
  const auto h = halfspace_from_pair(features({1, 1}, 3.0), features({1, 1}, 5.0));
  EXPECT_EQ(h.normal, (std::vector<double>{0.0, 0.0}));
  EXPECT_GT(h.offset, 0.0);
  EXPECT_TRUE(h.contains(WeightVector{100.0, 100.0}));
}

TEST(Halfspace, IdenticalFeaturesAreDegenerate) {
  EXPECT_THROW(halfspace_from_pair(features({1}, 2.0), features({1}, 2.0)),
               DegenerateHalfspaceError);
}

TEST(ClassifyRegion, AllNoneAndSomeSupportSamples) {
  // Lambda = { w : w0 <= 1 }
  Halfspace h{{1.0}, 1.0, 0, 1};
  EXPECT_EQ(classify_region(region_with({{0.2}, {0.9}}), h), Side::InsideIJ);
  EXPECT_EQ(classify_region(region_with({{1.2}, {3.0}}), h), Side::InsideJI);
  EXPECT_EQ(classify_region(region_with({{0.5}, {1.5}}), h), Side::Mixed);
  EXPECT_EQ(classify_region(region_with({{1.0}}), h), Side::InsideIJ);
}

TEST(ClassifyRegion, InsideImpliesCostOrderAtEverySupportSample) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = ts::random_instance(rng, 4, 9, 3, 6);
    auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 300, rng());
    HalfspaceCache cache(rs);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (std::size_t j = 0; j < rs.size(); ++j) {
        if (i == j || cache.degenerate(int(i), int(j))) continue;
        const auto& sides = cache.sides(int(i), int(j));
        for (std::size_t r = 0; r < rs.size(); ++r) {
          if (sides[r] != Side::InsideIJ) continue;
          for (const auto& w : rs[r].support) {
            EXPECT_LE(path_cost(rs[i].canonical_path, w),
                      path_cost(rs[j].canonical_path, w) + 1e-9);
          }
        }
      }
    }
  }
}

TEST(SampleRegions, SinglePathGivesOneRegion) {
  std::vector<Vertex> vs{{0, {}, {}}, {1, {}, {}}};
  std::vector<Edge> es{{0, 0, 1, 2.0}, {1, 1, 0, 2.0}};
  EnvironmentGraph g("line", vs, es);
  ConstraintSet cs(g, {{0, ConstraintKind::Avoid, {0}, 0.0, 5.0, {}}});
  for (std::size_t m : {1u, 10u, 500u}) {
    EXPECT_EQ(sample_regions(g, cs, TaskSpec{0, 1}, m, 9).size(), 1u);
  }
}

TEST(SampleRegions, TwoRouteThresholdAtFive) {
  // Route B (t = 5, one violation) wins exactly when w0 < 5.
  auto inst = ts::two_route_instance(10.0, 5.0, 10.0);
  auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 2000, 4);
  ASSERT_EQ(rs.size(), 2u);
  const auto b = rs.find_path({1, 2});
  ASSERT_TRUE(b.has_value());
  for (std::size_t r = 0; r < rs.size(); ++r) {
    for (const auto& w : rs[r].support) {
      if (static_cast<int>(r) == *b) {
        EXPECT_LT(w[0], 5.0);
      } else {
        EXPECT_GE(w[0], 5.0);
      }
    }
  }
  // The upper corner lands in route A's region, which is therefore region 0.
  EXPECT_EQ(*b, 1);
}

TEST(SampleRegions, OneSamplePlusCorners) {
  auto inst = ts::two_route_instance(10.0, 5.0, 10.0);
  auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 1, 77);
  EXPECT_GE(rs.size(), 1u);
  EXPECT_EQ(rs.samples().size(), 3u);
  std::size_t total = 0;
  for (const auto& r : rs) total += r.support_count();
  EXPECT_EQ(total, 3u);
  EXPECT_EQ(rs.samples()[0], inst.constraints.upper_corner());
  EXPECT_EQ(rs.samples()[1], inst.constraints.lower_corner());
  EXPECT_EQ(rs.assignment()[0], 0);
}

TEST(SampleRegions, ZeroSamplesIsInputError) {
  auto inst = ts::two_route_instance(10.0, 5.0, 10.0);
  EXPECT_THROW(sample_regions(inst.graph, inst.constraints, inst.task, 0, 1), InputError);
}

TEST(SampleRegions, SupportReplansToCanonicalPath) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = ts::random_instance(rng, 4, 10, 4, 8);
    auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 200, rng());
    std::set<std::vector<EdgeId>> seen;
    for (const auto& r : rs) {
      ASSERT_FALSE(r.support.empty());
      EXPECT_TRUE(seen.insert(r.canonical_path.edges).second);
      for (const auto& w : r.support) {
        EXPECT_EQ(shortest_path(inst.graph, inst.constraints, w, inst.task).edges,
                  r.canonical_path.edges);
      }
    }
  }
}

TEST(SampleRegions, IndependentOfJobCount) {
  std::mt19937_64 rng(13);
  auto inst = ts::random_instance(rng, 8, 12, 4, 10);
  auto one = sample_regions(inst.graph, inst.constraints, inst.task, 1000, 99, 1);
  auto four = sample_regions(inst.graph, inst.constraints, inst.task, 1000, 99, 4);
  ASSERT_EQ(one.size(), four.size());
  EXPECT_EQ(one.assignment(), four.assignment());
  for (std::size_t r = 0; r < one.size(); ++r) {
    EXPECT_EQ(one[r].canonical_path.edges, four[r].canonical_path.edges);
  }
}

TEST(SampleRegions, MoreSamplesNeverLoseARegion) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = ts::random_instance(rng, 5, 10, 4, 8);
    const auto seed = rng();
    auto small = sample_regions(inst.graph, inst.constraints, inst.task, 100, seed);
    auto large = sample_regions(inst.graph, inst.constraints, inst.task, 2000, seed);
    for (const auto& r : small) {
      EXPECT_TRUE(large.find_path(r.canonical_path.edges).has_value());
    }
  }
}

TEST(SampleRegions, GroupsMatchExhaustiveClassification) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = ts::random_instance(rng, 4, 10, 4, 8);
    auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 1000, rng());
    const auto paths = enumerate_paths(inst.graph, inst.constraints, inst.task, 200000);
    const auto oracle = ts::group_by_enumeration(paths, rs.samples());
    ASSERT_EQ(oracle.canonical.size(), rs.size());
    EXPECT_EQ(oracle.assignment, rs.assignment());
    for (std::size_t r = 0; r < rs.size(); ++r) {
      EXPECT_EQ(oracle.canonical[r], rs[r].canonical_path.edges);
    }
  }
}

TEST(HalfspaceCache, SidesAgreeWithCostComparison) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = ts::random_instance(rng, 4, 9, 3, 6);
    auto rs = sample_regions(inst.graph, inst.constraints, inst.task, 400, rng());
    HalfspaceCache cache(rs);
    for (int i = 0; i < int(rs.size()); ++i) {
      for (int j = 0; j < int(rs.size()); ++j) {
        if (i == j) continue;
        if (cache.degenerate(i, j)) {
          EXPECT_THROW(cache.halfspace(i, j), DegenerateHalfspaceError);
          continue;
        }
        const auto& sides = cache.sides(i, j);
        for (int r = 0; r < int(rs.size()); ++r) {
          EXPECT_EQ(sides[r], ts::side_by_costs(rs, r, i, j));
        }
        // The pair's own regions are always decisive.
        EXPECT_EQ(sides[i], Side::InsideIJ);
        EXPECT_EQ(sides[j], Side::InsideJI);
      }
    }
  }
}
