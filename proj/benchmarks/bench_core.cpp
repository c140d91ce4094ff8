#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "pathpref/bayes.hpp"
#include "pathpref/query_select.hpp"
#include "pathpref/regions.hpp"
#include "pathpref/scenarios.hpp"

using namespace pathpref;

namespace {

const Scenario& spec_a() {
  static const Scenario s = build_named_scenario("spec-A");
  return s;
}

const Scenario& prm() {
  static const Scenario s = build_named_scenario("prm-400-10-20");
  return s;
}

WeightVector uniform_weight(const ConstraintSet& c, std::mt19937_64& rng) {
  const WeightVector lo = c.lower_corner();
  const WeightVector hi = c.upper_corner();
  std::vector<double> w(lo.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
  }
  return WeightVector(w);
}

void BM_ShortestPath(benchmark::State& state, const Scenario& (*scenario)()) {
  const Scenario& s = scenario();
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    const auto w = uniform_weight(s.constraints, rng);
    benchmark::DoNotOptimize(shortest_path(s.graph, s.constraints, w, s.tasks[0]));
  }
}
BENCHMARK_CAPTURE(BM_ShortestPath, spec_a, spec_a);
BENCHMARK_CAPTURE(BM_ShortestPath, prm_400, prm);

void BM_SampleRegions(benchmark::State& state) {
  const Scenario& s = spec_a();
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_regions(s.graph, s.constraints, s.tasks[0], m, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleRegions)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MerrSelect(benchmark::State& state) {
  const Scenario& s = spec_a();
  const auto regions = sample_regions(s.graph, s.constraints, s.tasks[0], 2000, 7);
  const auto posterior = PosteriorState::for_regions(regions, PriorKind::Uniform);
  HalfspaceCache warm(regions);
  merr_select(posterior, warm, 0, 0.9);
  for (auto _ : state) {
    if (state.range(0) == 0) {
      // Cold cache: every pair is classified again.
      HalfspaceCache cache(regions);
      benchmark::DoNotOptimize(merr_select(posterior, cache, 0, 0.9));
    } else {
      benchmark::DoNotOptimize(merr_select(posterior, warm, 0, 0.9));
    }
  }
  state.counters["regions"] = static_cast<double>(regions.size());
}
BENCHMARK(BM_MerrSelect)->ArgName("warm")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
