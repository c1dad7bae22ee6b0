#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/dataset.hpp"

namespace causalkit {

struct LogisticConfig {
  double ridge = 1e-8;
  int max_iterations = 100;
  double gradient_tolerance = 1e-10;
  int max_step_halvings = 20;
};

/// Fitted P(target = 1 | covariates) = sigmoid(intercept + coefficients . z).
struct LogisticModel {
  double intercept = 0.0;
  std::vector<std::pair<std::string, double>> coefficients;
  bool converged = false;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  /// Penalized objective at the start and after every accepted Newton step.
  std::vector<double> objective_trace;
};

// The objective is (LL(beta) - ridge * |coefficients|^2 / 2) / n, where LL is
// the summed log-likelihood and beta = (intercept, coefficients...). The
// intercept is not penalized. Dividing by n leaves the maximizer unchanged and
// keeps the gradient tolerance independent of the sample size.

/// Value of the penalized objective at `beta`. Throws DimensionMismatch.
double penalized_log_likelihood(const Table& t, std::string_view target,
                                std::span<const std::string> covariates,
                                std::span<const double> beta, double ridge = 1e-8);

/// Exact gradient of penalized_log_likelihood. Throws DimensionMismatch
/// (wrong beta length or zero rows).
std::vector<double> logistic_gradient(const Table& t, std::string_view target,
                                      std::span<const std::string> covariates,
                                      std::span<const double> beta, double ridge = 1e-8);

/// Newton ascent from beta = 0 with step halving. Throws NonBinaryTarget,
/// DimensionMismatch (fewer rows than parameters) or SingularHessian.
LogisticModel fit_logistic(const Table& t, std::string_view target,
                           std::span<const std::string> covariates,
                           const LogisticConfig& config = {});

inline constexpr double kPropensityFloor = 1e-12;

/// sigmoid(intercept + beta . z) per row, clamped to [1e-12, 1 - 1e-12].
std::vector<double> predict_propensity(const LogisticModel& m, const Table& t);

}  // namespace causalkit
