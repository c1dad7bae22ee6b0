#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "causalkit/causal_graph.hpp"
#include "causalkit/dataset.hpp"

namespace causalkit {

/// How a variable is generated from eta = intercept + sum(weight * parent):
///   linear     eta + noise_std * N(0, 1)
///   logistic   Bernoulli(sigmoid(eta)); noise_std ignored
///   threshold  1 if eta + noise_std * N(0, 1) > 0 else 0
enum class Link { Linear, Logistic, Threshold };

std::string_view to_string(Link link) noexcept;

struct ScmTerm {
  std::string parent;
  double weight = 0.0;
};

struct ScmVariable {
  std::string name;
  Link link = Link::Linear;
  double intercept = 0.0;
  std::vector<ScmTerm> parents;
  double noise_std = 0.0;
};

/// Structural causal model in ancestral order: every parent is declared
/// before its child, which makes the model acyclic by construction.
class ScmSpec {
 public:
  ScmSpec() = default;
  /// Throws InvalidScm (bad names, forward/unknown parents, negative or
  /// non-finite parameters).
  static ScmSpec create(std::vector<ScmVariable> variables);

  const std::vector<ScmVariable>& variables() const noexcept { return variables_; }
  std::size_t size() const noexcept { return variables_.size(); }
  /// Throws UnknownVariable.
  std::size_t index_of(std::string_view name) const;
  const std::vector<std::size_t>& parent_indices(std::size_t v) const { return parent_index_.at(v); }

  /// Graph with one edge per nonzero-or-zero parent term.
  CausalGraph graph() const;

 private:
  std::vector<ScmVariable> variables_;
  std::vector<std::vector<std::size_t>> parent_index_;
};

/// Text form, one variable per line:
///   name ~ link(intercept; parent:weight, parent:weight; noise_std)
/// `#` comments and blank lines are ignored; the parent list may be empty.
ScmSpec parse_scm(std::string_view text);
std::string render_scm(const ScmSpec& scm);

/// Ancestral sampling, one table column per variable in declaration order.
/// Deterministic given the seed.
Table sample_dataset(const ScmSpec& scm, std::size_t n, std::uint64_t seed);

struct MonteCarloAte {
  double ate = 0.0;
  double standard_error = 0.0;
};

/// E[Y | do(T = 1)] - E[Y | do(T = 0)], evaluated on shared exogenous noise.
/// Throws UnknownVariable, InvalidArgument (treatment not before outcome).
MonteCarloAte true_ate_mc_detailed(const ScmSpec& scm, std::string_view treatment,
                                   std::string_view outcome, std::size_t n_mc = 1'000'000,
                                   std::uint64_t seed = 42);

double true_ate_mc(const ScmSpec& scm, std::string_view treatment, std::string_view outcome,
                   std::size_t n_mc = 1'000'000, std::uint64_t seed = 42);

/// Z ~ N(0,1); T ~ Bernoulli(sigmoid(0.8 Z)); Y = 0.7 T + 1.2 Z + N(0, 0.5).
ScmSpec confounded_linear_scenario();

struct CohortConfig {
  std::size_t n_students = 1343;
  std::uint64_t seed = 42;
  double confounding_strength = 1.0;
};

struct Cohort {
  Table table;
  ScmSpec scm;
};

/// Synthetic first-year cohort. Columns: Age, AvgGrade, ExamsTaken,
/// MaxRegAcum, ApprovalTimeM12, MaxRegAcumMayor6 (MaxRegAcum > 6) and
/// ApprovalTimeM12Mayor2 (ApprovalTimeM12 > 2). AvgGrade drives both the
/// accumulation of regular subjects and the approval time, scaled by
/// confounding_strength. Integer-like columns are rounded after sampling; the
/// returned ScmSpec is the pre-rounding model.
Cohort student_cohort_generator(const CohortConfig& config);

inline constexpr const char* kCohortTreatment = "MaxRegAcumMayor6";
inline constexpr const char* kCohortOutcome = "ApprovalTimeM12Mayor2";

/// Analysis graph matching the cohort generator, with the latent
/// MaxRegAcum -> MaxRegAcumMayor6 link folded into direct edges.
std::string cohort_graph_text();

}  // namespace causalkit
