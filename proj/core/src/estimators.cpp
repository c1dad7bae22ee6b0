#include "causalkit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Core>
#include <Eigen/QR>

#include "causalkit/error.hpp"
#include "causalkit/random.hpp"

namespace causalkit {
namespace {

struct Arms {
  std::vector<std::size_t> treated;
  std::vector<std::size_t> control;
};

Arms prepare(const Table& t, const AnalysisSpec& spec, const Estimand& e) {
  if (!e.treatment.empty() && (e.treatment != spec.treatment || e.outcome != spec.outcome)) {
    fail(ErrorCode::InvalidArgument, "estimand (" + e.treatment + " -> " + e.outcome +
                                         ") does not match analysis (" + spec.treatment + " -> " +
                                         spec.outcome + ")");
  }
  const auto treatment = t.column(spec.treatment);
  (void)t.column(spec.outcome);
  for (const auto& z : e.adjustment_set) (void)t.column(z);
  if (!is_binary(treatment)) {
    fail(ErrorCode::NonBinaryVariable, "treatment column '" + spec.treatment + "' is not 0/1");
  }
  Arms arms;
  for (std::size_t i = 0; i < treatment.size(); ++i) {
    (treatment[i] == 1.0 ? arms.treated : arms.control).push_back(i);
  }
  if (arms.treated.empty() || arms.control.empty()) {
    fail(ErrorCode::EmptyTreatmentArm, "treatment column '" + spec.treatment + "' has an empty " +
                                           (arms.treated.empty() ? "treated" : "control") + " arm");
  }
  return arms;
}

std::vector<double> pick(std::span<const double> values, std::span<const std::size_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(values[r]);
  return out;
}

// ATT over treated rows and ATC over control rows given each unit's match in
// the opposite arm, blended by arm size.
Estimate blend_matches(const Table& t, const AnalysisSpec& spec, const Arms& arms,
                       std::span<const std::size_t> match_for_treated,
                       std::span<const std::size_t> match_for_control, EstimatorKind kind) {
  const auto y = t.column(spec.outcome);
  double att = 0.0;
  for (std::size_t i = 0; i < arms.treated.size(); ++i) {
    att += y[arms.treated[i]] - y[arms.control[match_for_treated[i]]];
  }
  att /= static_cast<double>(arms.treated.size());
  double atc = 0.0;
  for (std::size_t j = 0; j < arms.control.size(); ++j) {
    atc += y[arms.treated[match_for_control[j]]] - y[arms.control[j]];
  }
  atc /= static_cast<double>(arms.control.size());

  const auto nt = static_cast<double>(arms.treated.size());
  const auto nc = static_cast<double>(arms.control.size());
  Estimate est;
  est.ate = (nt * att + nc * atc) / (nt + nc);
  est.method = kind;
  est.n_treated = arms.treated.size();
  est.n_control = arms.control.size();
  return est;
}

std::vector<double> fitted_propensity(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                                      const EstimatorOptions& options) {
  const auto model = fit_logistic(t, spec.treatment, e.adjustment_set, options.logistic);
  return predict_propensity(model, t);
}

// Brute-force nearest neighbour in standardized covariate space.
std::vector<std::size_t> nearest_by_distance(const std::vector<std::vector<double>>& cols,
                                             std::span<const std::size_t> queries,
                                             std::span<const std::size_t> pool) {
  std::vector<std::size_t> out(queries.size(), 0);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < pool.size(); ++c) {
      double d2 = 0.0;
      for (const auto& col : cols) {
        const double diff = col[queries[q]] - col[pool[c]];
        d2 += diff * diff;
        if (d2 >= best) break;
      }
      if (d2 < best) {
        best = d2;
        out[q] = c;
      }
    }
  }
  return out;
}

}  // namespace

std::string method_name(EstimatorKind kind) { return "backdoor." + std::string(to_string(kind)); }

std::vector<std::size_t> nearest_by_score(std::span<const double> queries, std::span<const double> pool) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pool[a] < pool[b] || (pool[a] == pool[b] && a < b);
  });
  std::vector<double> sorted(pool.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = pool[order[k]];

  // First position holding `value`; that entry carries the run's lowest index.
  auto first_of = [&](double value) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
  };

  std::vector<std::size_t> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double q = queries[i];
    const std::size_t above = first_of(q);
    if (above == 0) {
      out[i] = order[0];
      continue;
    }
    const std::size_t below = first_of(sorted[above - 1]);
    if (above == sorted.size()) {
      out[i] = order[below];
      continue;
    }
    const double d_below = q - sorted[below];
    const double d_above = sorted[above] - q;
    if (d_below < d_above) {
      out[i] = order[below];
    } else if (d_above < d_below) {
      out[i] = order[above];
    } else {
      out[i] = std::min(order[below], order[above]);
    }
  }
  return out;
}

Estimate psm_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                 const EstimatorOptions& options) {
  const Arms arms = prepare(t, spec, e);
  const auto score = fitted_propensity(t, spec, e, options);
  const auto treated_scores = pick(score, arms.treated);
  const auto control_scores = pick(score, arms.control);
  const auto for_treated = nearest_by_score(treated_scores, control_scores);
  const auto for_control = nearest_by_score(control_scores, treated_scores);
  return blend_matches(t, spec, arms, for_treated, for_control, EstimatorKind::PropensityScoreMatching);
}

Estimate distance_matching_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                               const EstimatorOptions&) {
  const Arms arms = prepare(t, spec, e);
  const Table z = standardize_columns(t, e.adjustment_set);
  std::vector<std::vector<double>> cols;
  for (const auto& name : e.adjustment_set) {
    const auto c = z.column(name);
    cols.emplace_back(c.begin(), c.end());
  }
  const auto for_treated = nearest_by_distance(cols, arms.treated, arms.control);
  const auto for_control = nearest_by_distance(cols, arms.control, arms.treated);
  return blend_matches(t, spec, arms, for_treated, for_control, EstimatorKind::DistanceMatching);
}

Estimate stratification_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                            const EstimatorOptions& options) {
  if (options.n_strata == 0) fail(ErrorCode::InvalidArgument, "stratification needs at least one stratum");
  (void)prepare(t, spec, e);
  const auto score = fitted_propensity(t, spec, e, options);
  const auto treatment = t.column(spec.treatment);
  const auto y = t.column(spec.outcome);

  const std::size_t n = t.n_rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

  const std::size_t base = n / options.n_strata;
  const std::size_t extra = n % options.n_strata;
  double weighted = 0.0;
  std::size_t used = 0, n_treated = 0, n_control = 0, begin = 0;
  for (std::size_t s = 0; s < options.n_strata; ++s) {
    const std::size_t size = base + (s < extra ? 1 : 0);
    double sum_t = 0.0, sum_c = 0.0;
    std::size_t cnt_t = 0, cnt_c = 0;
    for (std::size_t k = begin; k < begin + size; ++k) {
      const auto r = order[k];
      if (treatment[r] == 1.0) {
        sum_t += y[r];
        ++cnt_t;
      } else {
        sum_c += y[r];
        ++cnt_c;
      }
    }
    begin += size;
    if (cnt_t == 0 || cnt_c == 0) continue;
    weighted += static_cast<double>(size) * (sum_t / static_cast<double>(cnt_t) - sum_c / static_cast<double>(cnt_c));
    used += size;
    n_treated += cnt_t;
    n_control += cnt_c;
  }
  if (used == 0) {
    fail(ErrorCode::AllStrataDropped, "no propensity stratum contains both treated and control units");
  }
  Estimate est;
  est.ate = weighted / static_cast<double>(used);
  est.method = EstimatorKind::Stratification;
  est.n_treated = n_treated;
  est.n_control = n_control;
  return est;
}

Estimate linear_regression_ate(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                               const EstimatorOptions&) {
  const Arms arms = prepare(t, spec, e);
  const auto n = static_cast<Eigen::Index>(t.n_rows());
  const auto k = static_cast<Eigen::Index>(e.adjustment_set.size()) + 2;
  Eigen::MatrixXd x(n, k);
  Eigen::VectorXd y(n);
  x.col(0).setOnes();
  const auto treatment = t.column(spec.treatment);
  const auto outcome = t.column(spec.outcome);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 1) = treatment[static_cast<std::size_t>(i)];
    y(i) = outcome[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index j = 2; j < k; ++j) {
    const auto col = t.column(e.adjustment_set[static_cast<std::size_t>(j - 2)]);
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = col[static_cast<std::size_t>(i)];
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (n < k || qr.rank() < k) {
    fail(ErrorCode::RankDeficientDesign, "regression design [1, " + spec.treatment +
                                             ", adjustment...] is rank deficient");
  }
  const Eigen::VectorXd beta = qr.solve(y);

  Estimate est;
  est.ate = beta(1);
  est.method = EstimatorKind::LinearRegression;
  est.n_treated = arms.treated.size();
  est.n_control = arms.control.size();
  return est;
}

Estimate estimate_effect(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                         const EstimatorOptions& options) {
  switch (spec.estimator) {
    case EstimatorKind::PropensityScoreMatching: return psm_ate(t, spec, e, options);
    case EstimatorKind::DistanceMatching: return distance_matching_ate(t, spec, e, options);
    case EstimatorKind::Stratification: return stratification_ate(t, spec, e, options);
    case EstimatorKind::LinearRegression: return linear_regression_ate(t, spec, e, options);
  }
  fail(ErrorCode::InvalidArgument, "unknown estimator");
}

double difference_in_means(const Table& t, std::string_view treatment, std::string_view outcome) {
  const auto tr = t.column(treatment);
  const auto y = t.column(outcome);
  if (!is_binary(tr)) fail(ErrorCode::NonBinaryVariable, "treatment column '" + std::string(treatment) + "' is not 0/1");
  double sum_t = 0.0, sum_c = 0.0;
  std::size_t nt = 0, nc = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr[i] == 1.0) {
      sum_t += y[i];
      ++nt;
    } else {
      sum_c += y[i];
      ++nc;
    }
  }
  if (nt == 0 || nc == 0) fail(ErrorCode::EmptyTreatmentArm, "difference in means needs both arms");
  return sum_t / static_cast<double>(nt) - sum_c / static_cast<double>(nc);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Estimate bootstrap_ci(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                      const EstimatorOptions& options, const BootstrapOptions& boot) {
  if (boot.n_boot == 0) fail(ErrorCode::InvalidArgument, "bootstrap needs at least one replicate");
  if (!(boot.level >= 0.0 && boot.level < 1.0)) {
    fail(ErrorCode::InvalidArgument, "confidence level must lie in [0, 1)");
  }
  Estimate point = estimate_effect(t, spec, e, options);

  const std::size_t n = t.n_rows();
  const std::size_t budget = 10 * boot.n_boot;
  const auto treatment = t.column(spec.treatment);
  std::vector<double> replicates(boot.n_boot);
  std::vector<std::size_t> draws(boot.n_boot, 0);

  parallel_for(boot.n_boot, boot.exec, [&](std::size_t k) {
    RandomStream rng(spec.seed + k + 1);
    std::vector<std::size_t> rows(n);
    while (true) {
      if (++draws[k] > budget) {
        fail(ErrorCode::ResampleExhausted, "bootstrap could not draw a resample containing both arms");
      }
      bool has_t = false, has_c = false;
      for (auto& r : rows) {
        r = static_cast<std::size_t>(rng.below(n));
        (treatment[r] == 1.0 ? has_t : has_c) = true;
      }
      if (has_t && has_c) break;
    }
    std::sort(rows.begin(), rows.end());
    replicates[k] = estimate_effect(t.take_rows(rows), spec, e, options).ate;
  });

  if (std::accumulate(draws.begin(), draws.end(), std::size_t{0}) > budget) {
    fail(ErrorCode::ResampleExhausted, "bootstrap needed more than " + std::to_string(budget) + " resamples");
  }

  std::sort(replicates.begin(), replicates.end());
  const double tail = (1.0 - boot.level) / 2.0;
  point.ci = ConfidenceInterval{quantile_sorted(replicates, tail), quantile_sorted(replicates, 1.0 - tail),
                                boot.level};
  return point;
}

}  // namespace causalkit
