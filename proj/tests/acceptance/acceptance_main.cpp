// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1 for the shell).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "causalkit/causal_graph.hpp"
#include "causalkit/error.hpp"
#include "causalkit/estimators.hpp"
#include "causalkit/format.hpp"
#include "causalkit/propensity.hpp"
#include "causalkit/refuters.hpp"
#include "causalkit/scm_sim.hpp"
#include "oracles.hpp"

using namespace causalkit;
namespace oracle = causalkit::testing;

namespace {

const std::string kGolden = CAUSALKIT_GOLDEN_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string transcript;  // every computed value, for the determinism check

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void record(const std::string& key, double v) { transcript += key + "=" + format_double(v) + "\n"; }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) { return format_double(v); }

// Linear scenario: Z ~ N(0,1); T ~ Bernoulli(sigmoid(0.8 Z)); Y = 0.7 T + 1.2 Z + N(0, 0.5).
struct Scenario {
  Table table;
  AnalysisSpec spec;
  Estimand estimand;
};

Scenario scenario(EstimatorKind kind) {
  Scenario s;
  s.table = sample_dataset(confounded_linear_scenario(), 5000, 42);
  s.estimand = identify_backdoor(parse_graph("Z -> T\nZ -> Y\nT -> Y"), "T", "Y");
  s.spec = AnalysisSpec{"T", "Y", s.estimand.adjustment_set, kind, 42};
  return s;
}

struct Tolerance {
  EstimatorKind kind;
  double tol;
};
constexpr Tolerance kTolerances[] = {{EstimatorKind::PropensityScoreMatching, 0.07},
                                     {EstimatorKind::DistanceMatching, 0.08},
                                     {EstimatorKind::Stratification, 0.08},
                                     {EstimatorKind::LinearRegression, 0.03}};

Outcome criterion1(const ExecutionOptions&) {
  Outcome o;
  const auto start = Clock::now();
  const double truth = true_ate_mc(confounded_linear_scenario(), "T", "Y");
  o.record("true_ate", truth);
  o.check(std::abs(truth - 0.7) < 1e-9, "true ATE " + fmt(truth) + " != 0.7");
  for (const auto& [kind, tol] : kTolerances) {
    const auto s = scenario(kind);
    const double ate = estimate_effect(s.table, s.spec, s.estimand).ate;
    o.record(std::string(to_string(kind)), ate);
    o.detail += std::string(o.detail.empty() ? "" : ", ");
    const bool ok = std::abs(ate - 0.7) <= tol;
    o.detail += std::string(to_string(kind)) + "=" + fmt(ate) + (ok ? "" : " OUTSIDE +-" + fmt(tol));
    if (!ok) o.pass = false;
  }
  const double elapsed = seconds_since(start);
  o.detail += ", " + fmt(std::round(elapsed * 1000) / 1000) + " s";
  if (elapsed >= 10.0) {
    o.pass = false;
    o.detail += " (limit 10 s)";
  }
  return o;
}

Outcome criterion2(const ExecutionOptions&) {
  Outcome o;
  const auto s = scenario(EstimatorKind::PropensityScoreMatching);
  const double naive = difference_in_means(s.table, "T", "Y");
  o.record("naive", naive);
  o.detail = "naive=" + fmt(naive) + " (bias " + fmt(std::abs(naive - 0.7)) + ")";
  o.check(std::abs(naive - 0.7) >= 0.15, "naive bias below 0.15");
  for (const auto& [kind, tol] : kTolerances) {
    const auto sk = scenario(kind);
    const double ate = estimate_effect(sk.table, sk.spec, sk.estimand).ate;
    o.record(std::string(to_string(kind)), ate);
    o.check(std::abs(ate - 0.7) <= tol, std::string(to_string(kind)) + " outside its tolerance");
  }
  return o;
}

Outcome criterion3(const ExecutionOptions&) {
  Outcome o;
  const auto start = Clock::now();
  std::size_t dags = 0, queries = 0, mismatches = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& dag : oracle::all_labeled_dags(n)) {
      ++dags;
      const auto g = dag.to_graph();
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (x == y) continue;
          for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            if ((mask >> x & 1) || (mask >> y & 1)) continue;
            std::vector<char> in_z(n, 0);
            std::vector<std::string> z;
            for (std::size_t v = 0; v < n; ++v) {
              if (mask >> v & 1) {
                in_z[v] = 1;
                z.push_back(dag.name(v));
              }
            }
            ++queries;
            if (d_separated(g, dag.name(x), dag.name(y), z) != oracle::moral_d_separated(dag, x, y, in_z)) {
              ++mismatches;
            }
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  o.record("dags", static_cast<double>(dags));
  o.record("queries", static_cast<double>(queries));
  o.record("mismatches", static_cast<double>(mismatches));
  o.detail = std::to_string(dags) + " DAGs, " + std::to_string(queries) + " queries, " +
             std::to_string(mismatches) + " mismatches, " + fmt(std::round(elapsed * 10) / 10) + " s";
  o.check(mismatches == 0, "reachability and moralization disagree");
  o.check(elapsed < 60.0, "slower than 60 s");
  return o;
}

Outcome criterion4(const ExecutionOptions&) {
  Outcome o;
  std::mt19937_64 rng(42);
  const double densities[] = {0.3, 0.5, 0.7};
  std::size_t graphs = 0, failures = 0, non_empty = 0;
  while (graphs < 500) {
    const auto dag = oracle::random_dag(6, densities[graphs % 3], rng);
    const auto reach = oracle::transitive_closure(dag);
    const std::size_t t = rng() % 6, y = rng() % 6;
    if (t == y || !reach[t][y]) continue;
    ++graphs;
    const auto g = dag.to_graph();
    std::string line = dag.name(t) + "->" + dag.name(y) + ":";
    try {
      const auto e = identify_backdoor(g, dag.name(t), dag.name(y));
      std::vector<char> in_z(6, 0);
      for (const auto& name : e.adjustment_set) {
        in_z[g.id(name)] = 1;
        line += name + ",";
      }
      if (!e.adjustment_set.empty()) ++non_empty;
      const bool valid = oracle::backdoor_by_paths(dag, t, y, in_z);
      const bool minimal = static_cast<int>(e.adjustment_set.size()) == oracle::minimal_backdoor_size(dag, t, y);
      if (!valid || !minimal) ++failures;
    } catch (const Error& err) {
      // Every node is observed, so a valid set always exists.
      ++failures;
      line += std::string("error ") + err.what();
    }
    o.transcript += line + "\n";
  }
  o.detail = std::to_string(graphs) + " DAGs (" + std::to_string(non_empty) + " needing adjustment), " +
             std::to_string(failures) + " invalid or non-minimal";
  o.check(failures == 0, "oracle disagreement");
  return o;
}

Outcome criterion5(const ExecutionOptions&) {
  Outcome o;
  // (a) Gradient against central differences.
  const auto fd_table = sample_dataset(parse_scm("A ~ linear(0; ; 1)\nB ~ linear(1; A:0.5; 2)\n"
                                                 "T ~ logistic(-0.4; A:1.2, B:-0.6; 0)"),
                                       800, 42);
  const std::vector<std::string> cov{"A", "B"};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double h = 1e-6;
  double worst_rel = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> beta{u(rng), u(rng), u(rng)};
    const auto g = logistic_gradient(fd_table, "T", cov, beta);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      auto up = beta, down = beta;
      up[j] += h;
      down[j] -= h;
      const double fd = (penalized_log_likelihood(fd_table, "T", cov, up) -
                         penalized_log_likelihood(fd_table, "T", cov, down)) / (2 * h);
      err = std::max(err, std::abs(fd - g[j]));
      scale = std::max(scale, std::abs(g[j]));
    }
    worst_rel = std::max(worst_rel, err / scale);
  }
  o.record("worst_rel", worst_rel);
  o.check(worst_rel <= 1e-6, "finite-difference mismatch " + fmt(worst_rel));

  // (b) Coefficient recovery at n = 10000, intercept 0 and slope 2.
  const auto rec = sample_dataset(parse_scm("X ~ linear(0; ; 1)\nT ~ logistic(0; X:2; 0)"), 10000, 42);
  const std::vector<std::string> x{"X"};
  const auto m = fit_logistic(rec, "T", x);
  o.record("intercept", m.intercept);
  o.record("slope", m.coefficients[0].second);
  o.check(std::abs(m.intercept) <= 0.1 && std::abs(m.coefficients[0].second - 2.0) <= 0.1,
          "recovery off: " + fmt(m.intercept) + ", " + fmt(m.coefficients[0].second));

  // (c) Monotone objective in every fit: the recovery fit, the scenario fit
  // and a sweep of harder designs (strong effects, near separation).
  std::vector<LogisticModel> fits{m};
  fits.push_back(fit_logistic(scenario(EstimatorKind::PropensityScoreMatching).table, "T",
                              std::vector<std::string>{"Z"}));
  for (int k = 0; k < 30; ++k) {
    const double slope = 0.5 + 0.5 * k;
    const auto t = sample_dataset(parse_scm("X ~ linear(0; ; 1)\nW ~ linear(0; X:0.3; 1)\nT ~ logistic(" +
                                            fmt(0.1 * (k % 7) - 0.3) + "; X:" + fmt(slope) + ", W:-1; 0)"),
                                  300 + 20 * static_cast<std::size_t>(k), 1000 + static_cast<std::uint64_t>(k));
    fits.push_back(fit_logistic(t, "T", std::vector<std::string>{"X", "W"}));
  }
  std::size_t non_monotone = 0, converged = 0;
  for (const auto& f : fits) {
    if (f.converged) ++converged;
    for (std::size_t i = 1; i < f.objective_trace.size(); ++i) {
      if (f.objective_trace[i] < f.objective_trace[i - 1]) {
        ++non_monotone;
        break;
      }
    }
    o.record("trace_end", f.objective_trace.back());
  }
  o.check(non_monotone == 0, std::to_string(non_monotone) + " fits with a decreasing objective");
  o.detail = "FD rel err " + fmt(worst_rel) + ", recovered (" + fmt(m.intercept) + ", " +
             fmt(m.coefficients[0].second) + "), " + std::to_string(fits.size()) + " fits monotone (" +
             std::to_string(converged) + " converged)" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion6(const ExecutionOptions& exec) {
  Outcome o;
  const auto s = scenario(EstimatorKind::PropensityScoreMatching);
  RefuterOptions opts;
  opts.exec = exec;

  const auto rcc = refute_random_common_cause(s.table, s.spec, s.estimand, {}, opts);
  const auto placebo = refute_placebo_treatment(s.table, s.spec, s.estimand, {}, opts);
  const auto subset = refute_data_subset(s.table, s.spec, s.estimand, {}, opts);
  const auto boot = refute_bootstrap(s.table, s.spec, s.estimand, {}, opts);
  for (const auto* r : {&rcc, &placebo, &subset, &boot}) {
    o.record(std::string(to_string(r->method)) + ".new", r->new_effect);
    o.record(std::string(to_string(r->method)) + ".p", r->p_value);
    for (double v : r->replicate_effects) o.record("rep", v);
  }

  double mean = 0.0, ss = 0.0;
  for (double v : subset.replicate_effects) mean += v;
  mean /= static_cast<double>(subset.replicate_effects.size());
  for (double v : subset.replicate_effects) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(subset.replicate_effects.size() - 1));

  o.check(std::abs(rcc.new_effect - rcc.estimated_effect) <= 0.05 && rcc.p_value >= 0.05, "random_common_cause");
  o.check(std::abs(placebo.new_effect) <= 0.05, "placebo_treatment");
  o.check(sd <= 0.1 * std::abs(subset.estimated_effect), "data_subset");
  o.check(boot.p_value >= 0.05, "bootstrap");

  const std::vector<double> constant(100, 0.5000000000000001);
  const double degenerate = refutation_p_value(constant, 0.5000000000000001);
  o.check(degenerate == 1.0, "degenerate p-value " + fmt(degenerate));

  o.detail = "rcc new " + fmt(rcc.new_effect) + " vs " + fmt(rcc.estimated_effect) + " p " + fmt(rcc.p_value) +
             "; placebo new " + fmt(placebo.new_effect) + "; subset sd " + fmt(sd) + " (limit " +
             fmt(0.1 * std::abs(subset.estimated_effect)) + "); bootstrap p " + fmt(boot.p_value) +
             "; degenerate p " + fmt(degenerate) + (o.detail.empty() ? "" : "; FAILED: " + o.detail);
  return o;
}

Outcome criterion7(const ExecutionOptions&) {
  Outcome o;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 40 + 20 * static_cast<std::size_t>(trial), p = 1 + static_cast<std::size_t>(trial) % 5;
    std::vector<Table::Column> cols{{"T", {}}, {"Y", {}}};
    std::vector<std::string> z;
    for (std::size_t j = 0; j < p; ++j) {
      z.push_back("Z" + std::to_string(j));
      cols.push_back({z.back(), {}});
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row{1.0, 0.0};
      double y = 1.0;
      double lin = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        row.push_back(g(rng));
        lin += 0.3 * row.back();
        y += (0.5 - 0.25 * static_cast<double>(j)) * row.back();
      }
      row[1] = lin + g(rng) > 0 ? 1.0 : 0.0;
      y += 0.8 * row[1] + g(rng);
      cols[0].values.push_back(row[1]);
      cols[1].values.push_back(y);
      for (std::size_t j = 0; j < p; ++j) cols[2 + j].values.push_back(row[2 + j]);
      rows.push_back(std::move(row));
    }
    const auto beta = oracle::normal_equations(rows, cols[1].values);
    const Estimand e{"T", "Y", z, ""};
    const AnalysisSpec spec{"T", "Y", z, EstimatorKind::LinearRegression, 42};
    const double ate = linear_regression_ate(Table::from_columns(cols), spec, e).ate;
    o.record("ols", ate);
    worst = std::max(worst, std::abs(ate - beta[1]));
  }
  o.detail = "50 problems, max |QR - normal equations| = " + fmt(worst);
  o.check(worst <= 1e-8, "exceeds 1e-8");
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "causalkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = cli::run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str() + err.str();
}

Outcome criterion8(const ExecutionOptions& exec) {
  Outcome o;
  const std::vector<std::string> base{"--data", kGolden + "/fixture.csv", "--graph", kGolden + "/fixture_graph.txt",
                                      "--treatment", "MaxRegAcumMayor6", "--outcome", "ApprovalTimeM12Mayor2",
                                      "--threads", std::to_string(exec.threads)};
  auto with = [&](std::string command, std::vector<std::string> extra) {
    std::vector<std::string> args{std::move(command)};
    args.insert(args.end(), base.begin(), base.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  struct Case {
    std::vector<std::string> args;
    std::string golden;
  };
  const std::vector<Case> cases{
      {with("analyze", {}), "analyze_text.txt"},
      {with("analyze", {"--format", "json"}), "analyze.json"},
      {with("analyze", {"--format", "json", "--ci", "--n-boot", "100"}), "analyze_ci.json"},
      {with("refute", {"--refuter", "random_common_cause", "--refuter", "placebo_treatment", "--refuter",
                       "data_subset", "--refuter", "bootstrap", "--n-sims", "20"}),
       "refute_text.txt"},
      {with("refute", {"--estimator", "distance_matching", "--refuter", "placebo_treatment", "--refuter", "bootstrap",
                       "--n-sims", "20", "--format", "json"}),
       "refute.json"},
  };
  std::size_t matched = 0;
  std::string text_report;
  for (const auto& c : cases) {
    int code = 0;
    const auto out = run_cli(c.args, code);
    o.transcript += out;
    if (c.golden == "analyze_text.txt") text_report = out;
    const bool same = code == 0 && out == slurp(kGolden + "/" + c.golden);
    if (same) ++matched;
    o.check(same, c.golden + " differs");
  }
  for (const char* needle : {"*** Causal Estimate ***", "Estimand type: nonparametric-ate", "Target units: ate",
                             "Mean value: ", "Causal Estimate is: "}) {
    o.check(text_report.find(needle) != std::string::npos, std::string("missing \"") + needle + "\"");
  }
  o.detail = std::to_string(matched) + "/" + std::to_string(cases.size()) + " golden files byte-identical" +
             (o.detail.empty() ? ", required strings present" : "; " + o.detail);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(const ExecutionOptions&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "estimator correctness on known ground truth", criterion1},
      {2, "confounding bias demonstration", criterion2},
      {3, "d-separation oracle equivalence (all DAGs up to 5 nodes)", criterion3},
      {4, "backdoor identification validity (500 random 6-node DAGs)", criterion4},
      {5, "logistic solver", criterion5},
      {6, "refuter behavior on a well-specified model", criterion6},
      {7, "OLS against normal equations", criterion7},
      {8, "format fidelity", criterion8},
  };

  int failed = 0;
  std::vector<std::string> transcripts;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run(ExecutionOptions{1});
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    transcripts.push_back(out.transcript);
    if (!out.pass) ++failed;
    std::printf("criterion %d %s: %s | %s\n", c.id, out.pass ? "PASS" : "FAIL", c.title,
                out.detail.c_str());
    std::fflush(stdout);
  }

  // Second run of every scenario with four replicate threads.
  std::size_t identical = 0;
  std::string differing;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string again;
    try {
      again = criteria[i].run(ExecutionOptions{4}).transcript;
    } catch (const std::exception& e) {
      again = std::string("exception: ") + e.what();
    }
    if (again == transcripts[i] && !again.empty()) {
      ++identical;
    } else {
      differing += " " + std::to_string(criteria[i].id);
    }
  }
  const bool det = identical == criteria.size();
  if (!det) ++failed;
  std::printf("criterion 9 %s: determinism | %zu/%zu scenarios byte-identical on a second run with 4 "
              "replicate threads%s\n",
              det ? "PASS" : "FAIL", identical, criteria.size(),
              det ? "" : ("; differing:" + differing).c_str());

  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
