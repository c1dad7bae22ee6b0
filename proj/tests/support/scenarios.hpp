#pragma once

#include <cstdint>

#include "causalkit/causal_graph.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/scm_sim.hpp"

namespace causalkit::testing {

// Linear confounded scenario (true ATE 0.7) with its triangle graph.
struct Scenario {
  Table table;
  AnalysisSpec spec;
  Estimand estimand;
};

inline Scenario linear_scenario(std::size_t n, std::uint64_t seed, EstimatorKind kind) {
  Scenario s;
  s.table = sample_dataset(confounded_linear_scenario(), n, seed);
  s.spec = AnalysisSpec{"T", "Y", {"Z"}, kind, seed};
  s.estimand = identify_backdoor(parse_graph("Z -> T\nZ -> Y\nT -> Y"), "T", "Y");
  return s;
}

}  // namespace causalkit::testing
