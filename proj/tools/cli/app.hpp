#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/refuters.hpp"

namespace causalkit::cli {

enum class Command { Analyze, Refute, Simulate, Histogram };
enum class OutputFormat { Text, Json };

struct RunConfig {
  Command command = Command::Analyze;
  std::string data_path;
  std::string graph_path;
  std::string treatment;
  std::string outcome;
  EstimatorKind estimator = EstimatorKind::PropensityScoreMatching;
  std::vector<RefuterKind> refuters;
  std::uint64_t seed = 42;
  OutputFormat format = OutputFormat::Text;

  std::size_t n_strata = 5;
  bool ci = false;
  std::size_t n_boot = 200;
  double ci_level = 0.95;
  std::size_t n_sims = 100;
  double fraction = 0.8;
  unsigned threads = 1;

  // simulate
  std::size_t n_students = 1343;
  double confounding = 1.0;
  std::string out_path;
  std::string graph_out_path;
  std::string scm_out_path;
  std::size_t n_mc = 1'000'000;

  // histogram
  std::string column;
  std::size_t bins = 10;
};

// Each runner returns the full stdout payload and throws causalkit::Error on
// any data or model failure; nothing is printed before success.
std::string run_analyze(const RunConfig& cfg);
std::string run_refute(const RunConfig& cfg);
std::string run_simulate(const RunConfig& cfg);
std::string run_histogram(const RunConfig& cfg);

/// Parses argv and dispatches. Exit codes: 0 success, 1 usage error,
/// 2 runtime/data error (one-line diagnostic on `err`).
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace causalkit::cli
