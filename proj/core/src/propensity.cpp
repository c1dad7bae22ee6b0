#include "causalkit/propensity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "causalkit/error.hpp"

namespace causalkit {
namespace {

struct Design {
  Eigen::MatrixXd x;  // n x (1 + p), leading column of ones
  Eigen::VectorXd y;
};

Design make_design(const Table& t, std::string_view target, std::span<const std::string> covariates) {
  const auto n = static_cast<Eigen::Index>(t.n_rows());
  const auto p = static_cast<Eigen::Index>(covariates.size());
  Design d{Eigen::MatrixXd(n, p + 1), Eigen::VectorXd(n)};
  d.x.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto col = t.column(covariates[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < n; ++i) d.x(i, j + 1) = col[static_cast<std::size_t>(i)];
  }
  const auto y = t.column(target);
  for (Eigen::Index i = 0; i < n; ++i) d.y(i) = y[static_cast<std::size_t>(i)];
  return d;
}

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) {
  return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

// The intercept (index 0) is not penalized.
double objective(const Design& d, const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = d.x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += d.y(i) * eta(i) - softplus(eta(i));
  const double penalty = 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
  return (ll - penalty) / static_cast<double>(eta.size());
}

Eigen::VectorXd gradient(const Design& d, const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = d.x * beta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = d.y(i) - sigmoid(eta(i));
  Eigen::VectorXd g = d.x.transpose() * resid;
  g.tail(g.size() - 1) -= ridge * beta.tail(beta.size() - 1);
  return g / static_cast<double>(eta.size());
}

// Collinearity is judged on X'X rescaled to unit diagonal, so covariate units
// do not matter. This is the information matrix at beta = 0 up to a factor.
void check_design_rank(const Design& d) {
  const Eigen::MatrixXd gram = d.x.transpose() * d.x;
  const Eigen::VectorXd diag = gram.diagonal();
  if ((diag.array() <= 0.0).any()) {
    fail(ErrorCode::SingularHessian, "logistic Hessian is singular; a covariate is identically zero");
  }
  const Eigen::VectorXd scale = diag.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = scale.asDiagonal() * gram * scale.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(scaled, Eigen::EigenvaluesOnly);
  if (spectrum.eigenvalues().minCoeff() < 1e-12 * spectrum.eigenvalues().maxCoeff()) {
    fail(ErrorCode::SingularHessian, "logistic Hessian is singular; covariates are collinear or duplicated");
  }
}

void check_beta(const Table& t, std::span<const std::string> covariates, std::span<const double> beta) {
  if (t.n_rows() == 0) fail(ErrorCode::DimensionMismatch, "logistic model needs at least one row");
  if (beta.size() != covariates.size() + 1) {
    fail(ErrorCode::DimensionMismatch, "parameter vector has " + std::to_string(beta.size()) +
                                           " entries, expected " + std::to_string(covariates.size() + 1));
  }
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double penalized_log_likelihood(const Table& t, std::string_view target,
                                std::span<const std::string> covariates,
                                std::span<const double> beta, double ridge) {
  check_beta(t, covariates, beta);
  return objective(make_design(t, target, covariates), to_eigen(beta), ridge);
}

std::vector<double> logistic_gradient(const Table& t, std::string_view target,
                                      std::span<const std::string> covariates,
                                      std::span<const double> beta, double ridge) {
  check_beta(t, covariates, beta);
  const Eigen::VectorXd g = gradient(make_design(t, target, covariates), to_eigen(beta), ridge);
  return {g.data(), g.data() + g.size()};
}

LogisticModel fit_logistic(const Table& t, std::string_view target,
                           std::span<const std::string> covariates, const LogisticConfig& config) {
  if (!is_binary(t.column(target))) {
    fail(ErrorCode::NonBinaryTarget, "logistic target '" + std::string(target) + "' is not 0/1");
  }
  if (t.n_rows() < covariates.size() + 1) {
    fail(ErrorCode::DimensionMismatch, "logistic model with " + std::to_string(covariates.size() + 1) +
                                           " parameters needs at least that many rows");
  }
  const Design d = make_design(t, target, covariates);
  check_design_rank(d);
  const auto n = static_cast<double>(d.x.rows());
  const auto k = d.x.cols();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  double current = objective(d, beta, config.ridge);
  Eigen::VectorXd grad = gradient(d, beta, config.ridge);

  LogisticModel model;
  model.objective_trace.push_back(current);

  while (grad.lpNorm<Eigen::Infinity>() > config.gradient_tolerance &&
         model.iterations < config.max_iterations) {
    // Negative Hessian of the penalized mean log-likelihood.
    const Eigen::VectorXd eta = d.x * beta;
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double p = sigmoid(eta(i));
      w(i) = p * (1.0 - p);
    }
    Eigen::MatrixXd info = d.x.transpose() * w.asDiagonal() * d.x;
    info.diagonal().tail(k - 1).array() += config.ridge;
    info /= n;
    const Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
      fail(ErrorCode::SingularHessian, "logistic Hessian is not positive definite");
    }
    const Eigen::VectorXd step = llt.solve(grad);

    double factor = 1.0;
    bool accepted = false;
    for (int h = 0; h <= config.max_step_halvings; ++h, factor *= 0.5) {
      const Eigen::VectorXd trial = beta + factor * step;
      const double value = objective(d, trial, config.ridge);
      if (value >= current) {
        beta = trial;
        current = value;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    ++model.iterations;
    model.objective_trace.push_back(current);
    grad = gradient(d, beta, config.ridge);
  }

  model.final_gradient_norm = grad.lpNorm<Eigen::Infinity>();
  model.converged = model.final_gradient_norm <= config.gradient_tolerance;
  model.intercept = beta(0);
  for (std::size_t j = 0; j < covariates.size(); ++j) {
    model.coefficients.emplace_back(covariates[j], beta(static_cast<Eigen::Index>(j) + 1));
  }
  return model;
}

std::vector<double> predict_propensity(const LogisticModel& m, const Table& t) {
  std::vector<double> eta(t.n_rows(), m.intercept);
  for (const auto& [name, coef] : m.coefficients) {
    const auto col = t.column(name);
    for (std::size_t i = 0; i < eta.size(); ++i) eta[i] += coef * col[i];
  }
  for (auto& v : eta) v = std::clamp(sigmoid(v), kPropensityFloor, 1.0 - kPropensityFloor);
  return eta;
}

}  // namespace causalkit
