#include "causalkit/refuters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "causalkit/error.hpp"
#include "causalkit/random.hpp"

namespace causalkit {
namespace {

constexpr int kMaxRedraws = 10;

template <typename Replicate>
RefutationResult run_replicates(RefuterKind kind, const Table& t, const AnalysisSpec& spec,
                                const Estimand& e, const EstimatorOptions& est,
                                const RefuterOptions& options, bool against_original,
                                Replicate&& replicate) {
  if (options.n_sims == 0) fail(ErrorCode::InvalidArgument, "refuter needs at least one simulation");
  RefutationResult result;
  result.method = kind;
  result.estimated_effect = estimate_effect(t, spec, e, est).ate;
  result.n_simulations = options.n_sims;
  result.replicate_effects.resize(options.n_sims);

  parallel_for(options.n_sims, options.exec, [&](std::size_t k) {
    RandomStream rng(spec.seed + k + 1);
    result.replicate_effects[k] = replicate(rng);
  });

  const auto& reps = result.replicate_effects;
  result.new_effect = std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(reps.size());
  const double reference = against_original ? result.estimated_effect : 0.0;
  result.p_value = refutation_p_value(reps, reference);
  return result;
}

bool both_arms(std::span<const double> treatment, std::span<const std::size_t> rows) {
  bool has_t = false, has_c = false;
  for (auto r : rows) (treatment[r] == 1.0 ? has_t : has_c) = true;
  return has_t && has_c;
}

std::string fresh_column_name(const Table& t, std::string base) {
  std::string name = base;
  for (int i = 1; t.has_column(name); ++i) name = base + "_" + std::to_string(i);
  return name;
}

}  // namespace

std::string_view to_string(RefuterKind kind) noexcept {
  switch (kind) {
    case RefuterKind::RandomCommonCause: return "random_common_cause";
    case RefuterKind::PlaceboTreatment: return "placebo_treatment";
    case RefuterKind::DataSubset: return "data_subset";
    case RefuterKind::BootstrapSample: return "bootstrap";
  }
  return "unknown";
}

std::string_view refuter_title(RefuterKind kind) noexcept {
  switch (kind) {
    case RefuterKind::RandomCommonCause: return "Add a random common cause";
    case RefuterKind::PlaceboTreatment: return "Use a Placebo Treatment";
    case RefuterKind::DataSubset: return "Use a subset of data";
    case RefuterKind::BootstrapSample: return "Bootstrap Sample Dataset";
  }
  return "unknown";
}

RefuterKind parse_refuter(std::string_view name) {
  if (name == "random_common_cause") return RefuterKind::RandomCommonCause;
  if (name == "placebo_treatment") return RefuterKind::PlaceboTreatment;
  if (name == "data_subset") return RefuterKind::DataSubset;
  if (name == "bootstrap" || name == "bootstrap_sample") return RefuterKind::BootstrapSample;
  fail(ErrorCode::InvalidArgument, "unknown refuter '" + std::string(name) + "'");
}

RefutationResult refute_random_common_cause(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                                            const EstimatorOptions& est, const RefuterOptions& options) {
  const std::string column = fresh_column_name(t, "random_common_cause");
  return run_replicates(RefuterKind::RandomCommonCause, t, spec, e, est, options, true,
                        [&](RandomStream& rng) {
                          std::vector<double> noise(t.n_rows());
                          for (auto& v : noise) v = rng.standard_normal();
                          Estimand widened = e;
                          widened.adjustment_set.push_back(column);
                          return estimate_effect(t.with_column(column, std::move(noise)), spec, widened, est).ate;
                        });
}

RefutationResult refute_placebo_treatment(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                                          const EstimatorOptions& est, const RefuterOptions& options) {
  const auto treatment = t.column(spec.treatment);
  return run_replicates(RefuterKind::PlaceboTreatment, t, spec, e, est, options, false,
                        [&](RandomStream& rng) {
                          std::vector<double> placebo(treatment.begin(), treatment.end());
                          rng.shuffle(placebo);
                          return estimate_effect(t.with_replaced_column(spec.treatment, std::move(placebo)),
                                                 spec, e, est).ate;
                        });
}

RefutationResult refute_data_subset(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                                    const EstimatorOptions& est, const RefuterOptions& options) {
  if (!(options.fraction > 0.0 && options.fraction <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "subset fraction must lie in (0, 1]");
  }
  const std::size_t n = t.n_rows();
  const auto size = static_cast<std::size_t>(std::floor(options.fraction * static_cast<double>(n)));
  if (size == 0) fail(ErrorCode::DegenerateSubset, "subset fraction selects no rows");
  const auto treatment = t.column(spec.treatment);

  return run_replicates(RefuterKind::DataSubset, t, spec, e, est, options, true, [&](RandomStream& rng) {
    std::vector<std::size_t> all(n);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      std::iota(all.begin(), all.end(), std::size_t{0});
      // partial Fisher-Yates: the first `size` slots become the sample
      for (std::size_t i = 0; i < size; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(all[i], all[j]);
      }
      std::vector<std::size_t> rows(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(rows.begin(), rows.end());
      if (both_arms(treatment, rows)) return estimate_effect(t.take_rows(rows), spec, e, est).ate;
    }
    fail(ErrorCode::DegenerateSubset, "data subsets of " + std::to_string(size) + " rows keep losing a treatment arm");
  });
}

RefutationResult refute_bootstrap(const Table& t, const AnalysisSpec& spec, const Estimand& e,
                                  const EstimatorOptions& est, const RefuterOptions& options) {
  const std::size_t n = t.n_rows();
  const auto treatment = t.column(spec.treatment);
  return run_replicates(RefuterKind::BootstrapSample, t, spec, e, est, options, true, [&](RandomStream& rng) {
    std::vector<std::size_t> rows(n);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
      std::sort(rows.begin(), rows.end());
      if (both_arms(treatment, rows)) return estimate_effect(t.take_rows(rows), spec, e, est).ate;
    }
    fail(ErrorCode::DegenerateSubset, "bootstrap resamples keep losing a treatment arm");
  });
}

RefutationResult refute(RefuterKind kind, const Table& t, const AnalysisSpec& spec, const Estimand& e,
                        const EstimatorOptions& est, const RefuterOptions& options) {
  switch (kind) {
    case RefuterKind::RandomCommonCause: return refute_random_common_cause(t, spec, e, est, options);
    case RefuterKind::PlaceboTreatment: return refute_placebo_treatment(t, spec, e, est, options);
    case RefuterKind::DataSubset: return refute_data_subset(t, spec, e, est, options);
    case RefuterKind::BootstrapSample: return refute_bootstrap(t, spec, e, est, options);
  }
  fail(ErrorCode::InvalidArgument, "unknown refuter");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double refutation_p_value(std::span<const double> replicates, double reference) {
  if (replicates.empty()) fail(ErrorCode::EmptyReplicates, "p-value needs at least one replicate");
  const auto n = static_cast<double>(replicates.size());
  const double m = std::accumulate(replicates.begin(), replicates.end(), 0.0) / n;
  double s = 0.0;
  if (replicates.size() > 1) {
    double ss = 0.0;
    for (double v : replicates) ss += (v - m) * (v - m);
    s = std::sqrt(ss / (n - 1.0));
  }
  if (s < 1e-12) return std::abs(m - reference) < 1e-12 ? 1.0 : 0.0;
  const double z = (reference - m) / s;
  // 2 * (1 - Phi(|z|)) == erfc(|z| / sqrt 2), without cancellation in the tail.
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace causalkit
