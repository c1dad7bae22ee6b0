#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causalkit/causal_graph.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/parallel.hpp"
#include "causalkit/propensity.hpp"

namespace causalkit {

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

/// Average treatment effect over the rows used (target units "ate").
struct Estimate {
  double ate = 0.0;
  EstimatorKind method = EstimatorKind::PropensityScoreMatching;
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  std::optional<ConfidenceInterval> ci;

  static constexpr const char* target_units = "ate";
};

/// "backdoor.<estimator>", the qualified name used in reports.
std::string method_name(EstimatorKind kind);

struct EstimatorOptions {
  std::size_t n_strata = 5;
  LogisticConfig logistic;
};

// All estimators read the treatment and outcome from `spec` and adjust for
// `estimand.adjustment_set`. The treatment must be 0/1 with both arms present
// (NonBinaryVariable, EmptyTreatmentArm); the outcome is any real column.

/// 1-NN matching on the fitted propensity score, with replacement, ties to the
/// lowest row index. ATE = (n_t * ATT + n_c * ATC) / n.
Estimate psm_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                 const EstimatorOptions& options = {});

/// Same matching scheme under Euclidean distance on standardized adjustment
/// columns.
Estimate distance_matching_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                               const EstimatorOptions& options = {});

/// Rows sorted by propensity and cut into n_strata contiguous near-equal
/// strata (earlier strata take the remainder). Strata missing an arm are
/// dropped and the rest weighted by size. Throws AllStrataDropped.
Estimate stratification_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                            const EstimatorOptions& options = {});

/// OLS of outcome on [1, treatment, adjustment...] by column-pivoted
/// Householder QR; the treatment coefficient is the ATE. Throws
/// RankDeficientDesign.
Estimate linear_regression_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                               const EstimatorOptions& options = {});

/// Dispatches on spec.estimator.
Estimate estimate_effect(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                         const EstimatorOptions& options = {});

/// Unadjusted mean(Y | T=1) - mean(Y | T=0).
double difference_in_means(const Table& t, std::string_view treatment, std::string_view outcome);

/// Nearest control for every query score: minimal |q - s|, ties to the lowest
/// index. Returned values index into `pool`.
std::vector<std::size_t> nearest_by_score(std::span<const double> queries,
                                          std::span<const double> pool);

struct BootstrapOptions {
  std::size_t n_boot = 200;
  double level = 0.95;
  ExecutionOptions exec;
};

/// Percentile bootstrap. Replicate k resamples n rows with replacement from a
/// stream seeded spec.seed + k + 1, redrawing samples that lose an arm; more
/// than 10 * n_boot draws in total raises ResampleExhausted.
Estimate bootstrap_ci(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                      const EstimatorOptions& options = {}, const BootstrapOptions& boot = {});

/// Linear-interpolation quantile (q in [0, 1]) of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace causalkit
