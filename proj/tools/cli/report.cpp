#include "report.hpp"

#include <json.hpp>

#include "causalkit/format.hpp"

namespace causalkit::cli {
namespace {

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string join(std::span<const std::string> items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::string render_text_report(const Estimand& estimand, const Estimate& estimate) {
  const auto& t = estimand.treatment;
  const auto& y = estimand.outcome;
  const auto& z = estimand.adjustment_set;
  const std::string ate = format_double(estimate.ate);

  std::string out;
  out += "*** Causal Estimate ***\n";
  out += "## Identified estimand\n";
  out += "Estimand type: nonparametric-ate\n";
  out += "### Estimand : 1\n";
  out += "Estimand name: backdoor\n";
  out += "Estimand expression:\n";
  out += "d/d[" + t + "] E[" + y + (z.empty() ? "" : "|" + join(z, ",")) + "]\n";
  out += "Estimand assumption 1, Unconfoundedness: " + estimand.assumption_text + "\n";
  out += "## Realized estimand\n";
  out += "b: " + y + "~" + t + (z.empty() ? "" : "+" + join(z, "+")) + "\n";
  out += std::string("Target units: ") + Estimate::target_units + "\n";
  out += "## Estimate\n";
  out += "Mean value: " + ate + "\n";
  out += "Causal Estimate is: " + ate + "\n";
  if (estimate.ci) {
    out += "Confidence interval (level " + format_double(estimate.ci->level) + "): [" +
           format_double(estimate.ci->lower) + ", " + format_double(estimate.ci->upper) + "]\n";
  }
  return out;
}

std::string render_interpretation(const Estimand& estimand, const Estimate& estimate) {
  return "Interpretation: moving [" + estimand.treatment + "] from 0 to 1 shifts the expected value of [" +
         estimand.outcome + "] by " + format_double(estimate.ate) +
         ", averaged over every unit in the dataset.\n";
}

std::string render_refutation_text(EstimatorKind estimator, const RefutationResult& result) {
  std::string out;
  out += "*** Class Name ***\n";
  out += method_name(estimator) + "\n";
  out += "Refute: " + std::string(refuter_title(result.method)) + "\n";
  out += "Estimated effect:" + format_double(result.estimated_effect) + "\n";
  out += "New effect:" + format_double(result.new_effect) + "\n";
  out += "p-value: " + format_double(result.p_value) + "\n";
  return out;
}

std::string render_json(const Estimand& estimand, const Estimate& estimate,
                        std::span<const RefutationResult> refutations) {
  std::string out = "{\n";
  out += "  \"estimand\": {\n";
  out += "    \"treatment\": " + json_string(estimand.treatment) + ",\n";
  out += "    \"outcome\": " + json_string(estimand.outcome) + ",\n";
  if (estimand.adjustment_set.empty()) {
    out += "    \"adjustment_set\": []\n";
  } else {
    out += "    \"adjustment_set\": [\n";
    for (std::size_t i = 0; i < estimand.adjustment_set.size(); ++i) {
      out += "      " + json_string(estimand.adjustment_set[i]) +
             (i + 1 < estimand.adjustment_set.size() ? ",\n" : "\n");
    }
    out += "    ]\n";
  }
  out += "  },\n";

  out += "  \"estimate\": {\n";
  out += "    \"method\": " + json_string(method_name(estimate.method)) + ",\n";
  out += "    \"ate\": " + format_double(estimate.ate) + ",\n";
  out += "    \"n_treated\": " + std::to_string(estimate.n_treated) + ",\n";
  out += "    \"n_control\": " + std::to_string(estimate.n_control) + (estimate.ci ? ",\n" : "\n");
  if (estimate.ci) {
    out += "    \"ci\": {\n";
    out += "      \"lower\": " + format_double(estimate.ci->lower) + ",\n";
    out += "      \"upper\": " + format_double(estimate.ci->upper) + ",\n";
    out += "      \"level\": " + format_double(estimate.ci->level) + "\n";
    out += "    }\n";
  }
  out += "  },\n";

  if (refutations.empty()) {
    out += "  \"refutations\": []\n";
  } else {
    out += "  \"refutations\": [\n";
    for (std::size_t i = 0; i < refutations.size(); ++i) {
      const auto& r = refutations[i];
      out += "    {\n";
      out += "      \"method\": " + json_string(std::string(to_string(r.method))) + ",\n";
      out += "      \"estimated_effect\": " + format_double(r.estimated_effect) + ",\n";
      out += "      \"new_effect\": " + format_double(r.new_effect) + ",\n";
      out += "      \"p_value\": " + format_double(r.p_value) + ",\n";
      out += "      \"n_simulations\": " + std::to_string(r.n_simulations) + "\n";
      out += (i + 1 < refutations.size() ? "    },\n" : "    }\n");
    }
    out += "  ]\n";
  }
  out += "}\n";
  return out;
}

}  // namespace causalkit::cli
