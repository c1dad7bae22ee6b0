#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causalkit/causal_graph.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/estimators.hpp"
#include "causalkit/parallel.hpp"

namespace causalkit {

enum class RefuterKind {
  RandomCommonCause,
  PlaceboTreatment,
  DataSubset,
  BootstrapSample,
};

std::string_view to_string(RefuterKind kind) noexcept;
/// Report title, e.g. "Add a random common cause".
std::string_view refuter_title(RefuterKind kind) noexcept;
/// Throws InvalidArgument.
RefuterKind parse_refuter(std::string_view name);

struct RefutationResult {
  RefuterKind method = RefuterKind::RandomCommonCause;
  double estimated_effect = 0.0;
  double new_effect = 0.0;
  double p_value = 1.0;
  std::size_t n_simulations = 0;
  std::vector<double> replicate_effects;
};

struct RefuterOptions {
  std::size_t n_sims = 100;
  double fraction = 0.8;
  ExecutionOptions exec;
};

// Every refuter re-runs spec.estimator on a perturbed copy of the data;
// replicate k draws from a stream seeded spec.seed + k + 1.

/// Appends a standard-normal column and adjusts for it as well. Reference for
/// the p-value is the original estimate.
RefutationResult refute_random_common_cause(const Table& t, const AnalysisSpec& spec,
                                            const Estimand& e, const EstimatorOptions& est = {},
                                            const RefuterOptions& options = {});

/// Replaces the treatment by a random permutation of itself. Reference is 0.
RefutationResult refute_placebo_treatment(const Table& t, const AnalysisSpec& spec,
                                          const Estimand& e, const EstimatorOptions& est = {},
                                          const RefuterOptions& options = {});

/// Re-estimates on floor(fraction * n) rows drawn without replacement (row
/// order kept). Throws DegenerateSubset after 10 draws lacking an arm.
RefutationResult refute_data_subset(const Table& t, const AnalysisSpec& spec,
                                    const Estimand& e, const EstimatorOptions& est = {},
                                    const RefuterOptions& options = {});

/// Re-estimates on n rows drawn with replacement. Throws DegenerateSubset
/// after 10 draws lacking an arm.
RefutationResult refute_bootstrap(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                                  const EstimatorOptions& est = {},
                                  const RefuterOptions& options = {});

RefutationResult refute(RefuterKind kind, const Table& t, const AnalysisSpec& spec,
                        const Estimand& e, const EstimatorOptions& est = {},
                        const RefuterOptions& options = {});

/// Two-sided normal-approximation p-value of `reference` against the
/// replicate distribution (sample sd). When the replicates have (near) zero
/// spread the answer is 1 if their mean equals the reference and 0 otherwise.
/// Throws EmptyReplicates.
double refutation_p_value(std::span<const double> replicates, double reference);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace causalkit
