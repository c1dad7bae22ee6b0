#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "causalkit/causal_graph.hpp"
#include "causalkit/estimators.hpp"
#include "causalkit/propensity.hpp"
#include "causalkit/scm_sim.hpp"

namespace ck = causalkit;

namespace {

struct Fixture {
  ck::Table table;
  ck::Estimand estimand;
  ck::AnalysisSpec spec;
};

Fixture linear(std::size_t n, ck::EstimatorKind kind) {
  Fixture f;
  f.table = ck::sample_dataset(ck::confounded_linear_scenario(), n, 42);
  f.estimand = ck::identify_backdoor(ck::parse_graph("Z -> T\nZ -> Y\nT -> Y"), "T", "Y");
  f.spec = {"T", "Y", f.estimand.adjustment_set, kind, 42};
  return f;
}

void BM_PsmAte(benchmark::State& state) {
  const auto f = linear(static_cast<std::size_t>(state.range(0)), ck::EstimatorKind::PropensityScoreMatching);
  for (auto _ : state) benchmark::DoNotOptimize(ck::psm_ate(f.table, f.spec, f.estimand).ate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PsmAte)->Arg(1000)->Arg(5000)->Arg(20000);

void BM_DistanceMatching(benchmark::State& state) {
  const auto f = linear(static_cast<std::size_t>(state.range(0)), ck::EstimatorKind::DistanceMatching);
  for (auto _ : state) benchmark::DoNotOptimize(ck::distance_matching_ate(f.table, f.spec, f.estimand).ate);
}
BENCHMARK(BM_DistanceMatching)->Arg(1000)->Arg(5000);

void BM_FitLogistic(benchmark::State& state) {
  const auto t = ck::sample_dataset(
      ck::parse_scm("A ~ linear(0; ; 1)\nB ~ linear(0; A:0.4; 1)\nT ~ logistic(0.2; A:1, B:-0.5; 0)"),
      static_cast<std::size_t>(state.range(0)), 42);
  const std::vector<std::string> cov{"A", "B"};
  for (auto _ : state) benchmark::DoNotOptimize(ck::fit_logistic(t, "T", cov).intercept);
}
BENCHMARK(BM_FitLogistic)->Arg(1000)->Arg(10000);

// Chain V0 -> V1 -> ... with a skip edge every third node.
void BM_DSeparated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::string text;
  for (int i = 0; i + 1 < n; ++i) {
    text += "V" + std::to_string(i) + " -> V" + std::to_string(i + 1) + "\n";
    if (i % 3 == 0 && i + 2 < n) text += "V" + std::to_string(i) + " -> V" + std::to_string(i + 2) + "\n";
  }
  const auto g = ck::parse_graph(text);
  const std::vector<std::string> z{"V" + std::to_string(n / 2)};
  const std::string last = "V" + std::to_string(n - 1);
  for (auto _ : state) benchmark::DoNotOptimize(ck::d_separated(g, "V0", last, z));
}
BENCHMARK(BM_DSeparated)->Arg(16)->Arg(256)->Arg(4096);

void BM_IdentifyBackdoor(benchmark::State& state) {
  const auto g = ck::parse_graph(ck::cohort_graph_text());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ck::identify_backdoor(g, ck::kCohortTreatment, ck::kCohortOutcome).adjustment_set);
  }
}
BENCHMARK(BM_IdentifyBackdoor);

}  // namespace

BENCHMARK_MAIN();
