#include "causalkit/scm_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <set>

#include "causalkit/error.hpp"
#include "causalkit/format.hpp"
#include "causalkit/random.hpp"

namespace causalkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Exogenous draw per variable: a standard normal for linear/threshold links,
// a uniform for logistic ones.
void draw_noise(const ScmSpec& scm, RandomStream& rng, std::vector<double>& noise) {
  for (std::size_t v = 0; v < scm.size(); ++v) {
    noise[v] = scm.variables()[v].link == Link::Logistic ? rng.uniform() : rng.standard_normal();
  }
}

// Structural equations for one unit; `forced` (if < size) is held at
// `forced_value`, which is the do-operator.
void evaluate(const ScmSpec& scm, const std::vector<double>& noise, std::size_t forced,
              double forced_value, std::vector<double>& values) {
  for (std::size_t v = 0; v < scm.size(); ++v) {
    if (v == forced) {
      values[v] = forced_value;
      continue;
    }
    const auto& var = scm.variables()[v];
    const auto& parents = scm.parent_indices(v);
    double eta = var.intercept;
    for (std::size_t p = 0; p < parents.size(); ++p) eta += var.parents[p].weight * values[parents[p]];
    switch (var.link) {
      case Link::Linear: values[v] = eta + var.noise_std * noise[v]; break;
      case Link::Logistic: values[v] = noise[v] < sigmoid(eta) ? 1.0 : 0.0; break;
      case Link::Threshold: values[v] = eta + var.noise_std * noise[v] > 0.0 ? 1.0 : 0.0; break;
    }
  }
}

double parse_real(std::string_view text, std::size_t line_no, const char* what) {
  text = trim(text);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": bad " + what + " '" + std::string(text) + "'");
  }
  return out;
}

Link parse_link(std::string_view text, std::size_t line_no) {
  if (text == "linear") return Link::Linear;
  if (text == "logistic") return Link::Logistic;
  if (text == "threshold") return Link::Threshold;
  fail(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": unknown link '" + std::string(text) + "'");
}

}  // namespace

std::string_view to_string(Link link) noexcept {
  switch (link) {
    case Link::Linear: return "linear";
    case Link::Logistic: return "logistic";
    case Link::Threshold: return "threshold";
  }
  return "linear";
}

ScmSpec ScmSpec::create(std::vector<ScmVariable> variables) {
  ScmSpec scm;
  std::vector<std::string> seen;
  for (const auto& var : variables) {
    if (!is_valid_node_name(var.name) || var.name.find_first_of("~();:") != std::string::npos) {
      fail(ErrorCode::InvalidScm, "invalid variable name '" + var.name + "'");
    }
    if (std::find(seen.begin(), seen.end(), var.name) != seen.end()) {
      fail(ErrorCode::InvalidScm, "variable '" + var.name + "' declared twice");
    }
    if (!std::isfinite(var.intercept) || !std::isfinite(var.noise_std) || var.noise_std < 0.0) {
      fail(ErrorCode::InvalidScm, "variable '" + var.name + "' has an invalid intercept or noise_std");
    }
    std::vector<std::size_t> parents;
    for (const auto& term : var.parents) {
      const auto it = std::find(seen.begin(), seen.end(), term.parent);
      if (it == seen.end()) {
        fail(ErrorCode::InvalidScm, "parent '" + term.parent + "' of '" + var.name + "' is not declared before it");
      }
      if (!std::isfinite(term.weight)) fail(ErrorCode::InvalidScm, "non-finite weight in '" + var.name + "'");
      const auto idx = static_cast<std::size_t>(it - seen.begin());
      if (std::find(parents.begin(), parents.end(), idx) != parents.end()) {
        fail(ErrorCode::InvalidScm, "parent '" + term.parent + "' listed twice for '" + var.name + "'");
      }
      parents.push_back(idx);
    }
    seen.push_back(var.name);
    scm.parent_index_.push_back(std::move(parents));
  }
  scm.variables_ = std::move(variables);
  return scm;
}

std::size_t ScmSpec::index_of(std::string_view name) const {
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (variables_[v].name == name) return v;
  }
  fail(ErrorCode::UnknownVariable, "unknown SCM variable '" + std::string(name) + "'");
}

CausalGraph ScmSpec::graph() const {
  std::vector<std::string> nodes;
  std::vector<CausalGraph::Edge> edges;
  for (const auto& var : variables_) {
    nodes.push_back(var.name);
    for (const auto& term : var.parents) edges.emplace_back(term.parent, var.name);
  }
  return CausalGraph::create(std::move(nodes), edges);
}

ScmSpec parse_scm(std::string_view text) {
  std::vector<ScmVariable> vars;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto where = "line " + std::to_string(line_no) + ": ";
    const auto tilde = line.find('~');
    const auto open = line.find('(');
    if (tilde == std::string_view::npos || open == std::string_view::npos || open < tilde || line.back() != ')') {
      fail(ErrorCode::Syntax, where + "expected 'name ~ link(intercept; parents; noise_std)'");
    }
    ScmVariable var;
    var.name = std::string(trim(line.substr(0, tilde)));
    var.link = parse_link(trim(line.substr(tilde + 1, open - tilde - 1)), line_no);

    const auto body = line.substr(open + 1, line.size() - open - 2);
    const auto semi1 = body.find(';');
    const auto semi2 = semi1 == std::string_view::npos ? semi1 : body.find(';', semi1 + 1);
    if (semi2 == std::string_view::npos || body.find(';', semi2 + 1) != std::string_view::npos) {
      fail(ErrorCode::Syntax, where + "expected exactly three ';'-separated sections");
    }
    var.intercept = parse_real(body.substr(0, semi1), line_no, "intercept");
    var.noise_std = parse_real(body.substr(semi2 + 1), line_no, "noise_std");

    std::string_view terms = trim(body.substr(semi1 + 1, semi2 - semi1 - 1));
    while (!terms.empty()) {
      const auto comma = terms.find(',');
      const auto term = trim(terms.substr(0, comma));
      terms = comma == std::string_view::npos ? std::string_view{} : trim(terms.substr(comma + 1));
      const auto colon = term.find(':');
      if (colon == std::string_view::npos) fail(ErrorCode::Syntax, where + "parent term needs 'name:weight'");
      var.parents.push_back({std::string(trim(term.substr(0, colon))),
                             parse_real(term.substr(colon + 1), line_no, "weight")});
    }
    vars.push_back(std::move(var));
  }
  return ScmSpec::create(std::move(vars));
}

std::string render_scm(const ScmSpec& scm) {
  std::string out;
  for (const auto& var : scm.variables()) {
    out += var.name + " ~ " + std::string(to_string(var.link)) + "(" + format_double(var.intercept) + "; ";
    for (std::size_t i = 0; i < var.parents.size(); ++i) {
      out += (i ? ", " : "") + var.parents[i].parent + ":" + format_double(var.parents[i].weight);
    }
    out += "; " + format_double(var.noise_std) + ")\n";
  }
  return out;
}

Table sample_dataset(const ScmSpec& scm, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<Table::Column> columns;
  for (const auto& var : scm.variables()) columns.push_back({var.name, std::vector<double>(n)});
  std::vector<double> noise(scm.size()), values(scm.size());
  for (std::size_t i = 0; i < n; ++i) {
    draw_noise(scm, rng, noise);
    evaluate(scm, noise, scm.size(), 0.0, values);
    for (std::size_t v = 0; v < scm.size(); ++v) columns[v].values[i] = values[v];
  }
  return Table::from_columns(std::move(columns));
}

MonteCarloAte true_ate_mc_detailed(const ScmSpec& scm, std::string_view treatment, std::string_view outcome,
                                   std::size_t n_mc, std::uint64_t seed) {
  const auto t = scm.index_of(treatment);
  const auto y = scm.index_of(outcome);
  if (t >= y) {
    fail(ErrorCode::InvalidArgument, "treatment '" + std::string(treatment) + "' must precede outcome '" +
                                         std::string(outcome) + "' in the model");
  }
  if (n_mc == 0) fail(ErrorCode::InvalidArgument, "Monte Carlo needs at least one draw");

  RandomStream rng(seed);
  std::vector<double> noise(scm.size()), treated(scm.size()), control(scm.size());
  // Welford running moments of the per-unit difference.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    draw_noise(scm, rng, noise);
    evaluate(scm, noise, t, 1.0, treated);
    evaluate(scm, noise, t, 0.0, control);
    const double diff = treated[y] - control[y];
    const double delta = diff - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (diff - mean);
  }
  MonteCarloAte out;
  out.ate = mean;
  out.standard_error = n_mc > 1 ? std::sqrt(m2 / static_cast<double>(n_mc - 1) / static_cast<double>(n_mc)) : 0.0;
  return out;
}

double true_ate_mc(const ScmSpec& scm, std::string_view treatment, std::string_view outcome,
                   std::size_t n_mc, std::uint64_t seed) {
  return true_ate_mc_detailed(scm, treatment, outcome, n_mc, seed).ate;
}

ScmSpec confounded_linear_scenario() {
  return ScmSpec::create({
      {"Z", Link::Linear, 0.0, {}, 1.0},
      {"T", Link::Logistic, 0.0, {{"Z", 0.8}}, 0.0},
      {"Y", Link::Linear, 0.0, {{"T", 0.7}, {"Z", 1.2}}, 0.5},
  });
}

Cohort student_cohort_generator(const CohortConfig& config) {
  if (config.n_students == 0) fail(ErrorCode::InvalidArgument, "cohort needs at least one student");
  if (!std::isfinite(config.confounding_strength)) {
    fail(ErrorCode::InvalidArgument, "confounding strength must be finite");
  }
  const double s = config.confounding_strength;
  // Population means used to centre the confounded equations so that the
  // marginal levels do not move with the confounding strength.
  constexpr double grade_mean = 6.5;
  constexpr double exams_mean = 2.0 + 1.5 * grade_mean;
  constexpr double treatment_effect = 2.6;  // years added by > 6 regular subjects
  constexpr double grade_on_regular = 1.2;
  constexpr double grade_on_time = 1.0;

  ScmSpec scm = ScmSpec::create({
      {"Age", Link::Linear, 21.0, {}, 2.0},
      {"AvgGrade", Link::Linear, grade_mean + 0.05 * 21.0, {{"Age", -0.05}}, 1.2},
      {"ExamsTaken", Link::Linear, 2.0, {{"AvgGrade", 1.5}}, 2.0},
      {"MaxRegAcum", Link::Linear, 6.0 + s * grade_on_regular * grade_mean - 0.1 * exams_mean,
       {{"AvgGrade", -s * grade_on_regular}, {"ExamsTaken", 0.1}}, 2.0},
      {"MaxRegAcumMayor6", Link::Threshold, -6.5, {{"MaxRegAcum", 1.0}}, 0.0},
      {"ApprovalTimeM12", Link::Linear, 2.0 - 0.4 * treatment_effect + s * grade_on_time * grade_mean,
       {{"MaxRegAcumMayor6", treatment_effect}, {"AvgGrade", -s * grade_on_time}}, 0.6},
      {"ApprovalTimeM12Mayor2", Link::Threshold, -2.0, {{"ApprovalTimeM12", 1.0}}, 0.0},
  });

  const Table raw = sample_dataset(scm, config.n_students, config.seed);
  auto copy = [&](std::string_view name) {
    const auto c = raw.column(name);
    return std::vector<double>(c.begin(), c.end());
  };
  auto rounded = [&](std::string_view name, bool non_negative) {
    auto v = copy(name);
    for (auto& x : v) {
      x = std::round(x);
      if (non_negative) x = std::max(x, 0.0);
      if (x == 0.0) x = 0.0;  // normalise -0
    }
    return v;
  };
  auto approval = copy("ApprovalTimeM12");
  for (auto& x : approval) x = std::max(x, 0.0);

  Table table = Table::from_columns({
      {"Age", rounded("Age", true)},
      {"AvgGrade", copy("AvgGrade")},
      {"ExamsTaken", rounded("ExamsTaken", true)},
      {"MaxRegAcum", rounded("MaxRegAcum", true)},
      {"ApprovalTimeM12", std::move(approval)},
  });
  table = binarize_above(table, "MaxRegAcum", 6.0, kCohortTreatment);
  table = binarize_above(table, "ApprovalTimeM12", 2.0, kCohortOutcome);
  return {std::move(table), std::move(scm)};
}

std::string cohort_graph_text() {
  return "# Synthetic first-year cohort: treatment MaxRegAcumMayor6, outcome ApprovalTimeM12Mayor2\n"
         "Age -> AvgGrade\n"
         "AvgGrade -> ExamsTaken\n"
         "AvgGrade -> MaxRegAcumMayor6\n"
         "ExamsTaken -> MaxRegAcumMayor6\n"
         "AvgGrade -> ApprovalTimeM12Mayor2\n"
         "MaxRegAcumMayor6 -> ApprovalTimeM12Mayor2\n";
}

}  // namespace causalkit
