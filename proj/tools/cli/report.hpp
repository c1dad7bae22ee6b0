#pragma once

#include <span>
#include <string>

#include "causalkit/causal_graph.hpp"
#include "causalkit/estimators.hpp"
#include "causalkit/refuters.hpp"

namespace causalkit::cli {

// Identified estimand, realized regression formula and the point estimate,
// one fixed line layout. A confidence-interval line follows when present.
std::string render_text_report(const Estimand& estimand, const Estimate& estimate);

// One-sentence reading of the estimate, printed after the report block.
std::string render_interpretation(const Estimand& estimand, const Estimate& estimate);

std::string render_refutation_text(EstimatorKind estimator, const RefutationResult& result);

// Single JSON object: estimand, estimate, refutations (keys in that order).
std::string render_json(const Estimand& estimand, const Estimate& estimate,
                        std::span<const RefutationResult> refutations);

}  // namespace causalkit::cli
