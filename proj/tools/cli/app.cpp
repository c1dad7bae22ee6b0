#include "app.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "causalkit/causal_graph.hpp"
#include "causalkit/error.hpp"
#include "causalkit/estimators.hpp"
#include "causalkit/format.hpp"
#include "causalkit/scm_sim.hpp"
#include "report.hpp"

namespace causalkit::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorCode::Io, "cannot write '" + path + "'");
}

struct Prepared {
  Table table;
  AnalysisSpec spec;
  Estimand estimand;
  EstimatorOptions options;
};

Prepared prepare(const RunConfig& cfg) {
  auto loaded = load_csv(cfg.data_path);
  CausalGraph graph;
  try {
    graph = parse_graph(read_file(cfg.graph_path));
  } catch (const Error& e) {
    throw Error(e.code(), cfg.graph_path + ": " + e.what());
  }
  for (const auto* name : {&cfg.treatment, &cfg.outcome}) {
    (void)graph.id(*name);
    (void)loaded.table.column(*name);
  }

  Prepared p;
  p.estimand = identify_backdoor(graph, cfg.treatment, cfg.outcome);
  p.spec.treatment = cfg.treatment;
  p.spec.outcome = cfg.outcome;
  p.spec.confounders = p.estimand.adjustment_set;
  p.spec.estimator = cfg.estimator;
  p.spec.seed = cfg.seed;
  validate(p.spec, loaded.table);
  p.options.n_strata = cfg.n_strata;
  p.table = std::move(loaded.table);
  return p;
}

Estimate estimate(const RunConfig& cfg, const Prepared& p) {
  if (!cfg.ci) return estimate_effect(p.table, p.spec, p.estimand, p.options);
  BootstrapOptions boot;
  boot.n_boot = cfg.n_boot;
  boot.level = cfg.ci_level;
  boot.exec.threads = cfg.threads;
  return bootstrap_ci(p.table, p.spec, p.estimand, p.options, boot);
}

}  // namespace

std::string run_analyze(const RunConfig& cfg) {
  const Prepared p = prepare(cfg);
  const Estimate est = estimate(cfg, p);
  if (cfg.format == OutputFormat::Json) return render_json(p.estimand, est, {});
  return render_text_report(p.estimand, est) + render_interpretation(p.estimand, est);
}

std::string run_refute(const RunConfig& cfg) {
  if (cfg.refuters.empty()) fail(ErrorCode::InvalidArgument, "refute needs at least one --refuter");
  const Prepared p = prepare(cfg);
  const Estimate est = estimate(cfg, p);

  RefuterOptions options;
  options.n_sims = cfg.n_sims;
  options.fraction = cfg.fraction;
  options.exec.threads = cfg.threads;
  std::vector<RefutationResult> results;
  for (auto kind : cfg.refuters) results.push_back(refute(kind, p.table, p.spec, p.estimand, p.options, options));

  if (cfg.format == OutputFormat::Json) return render_json(p.estimand, est, results);
  std::string out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i) out += "\n";
    out += render_refutation_text(cfg.estimator, results[i]);
  }
  return out;
}

std::string run_simulate(const RunConfig& cfg) {
  CohortConfig cohort_cfg;
  cohort_cfg.n_students = cfg.n_students;
  cohort_cfg.seed = cfg.seed;
  cohort_cfg.confounding_strength = cfg.confounding;
  const Cohort cohort = student_cohort_generator(cohort_cfg);
  const auto truth = true_ate_mc_detailed(cohort.scm, kCohortTreatment, kCohortOutcome, cfg.n_mc, cfg.seed);

  write_csv(cohort.table, cfg.out_path);
  if (!cfg.graph_out_path.empty()) write_file(cfg.graph_out_path, cohort_graph_text());
  if (!cfg.scm_out_path.empty()) write_file(cfg.scm_out_path, render_scm(cohort.scm));

  std::string out;
  out += "rows: " + std::to_string(cohort.table.n_rows()) + "\n";
  out += "output: " + cfg.out_path + "\n";
  out += std::string("treatment: ") + kCohortTreatment + "\n";
  out += std::string("outcome: ") + kCohortOutcome + "\n";
  out += "true ATE (Monte Carlo, " + std::to_string(cfg.n_mc) + " draws): " + format_double(truth.ate) +
         " (standard error " + format_double(truth.standard_error) + ")\n";
  out += "naive difference in means: " +
         format_double(difference_in_means(cohort.table, kCohortTreatment, kCohortOutcome)) + "\n";
  return out;
}

std::string run_histogram(const RunConfig& cfg) {
  const auto loaded = load_csv(cfg.data_path);
  return text_histogram(loaded.table, cfg.column, cfg.bins);
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string estimator_name = "propensity_score_matching";
  std::string format_name = "text";
  std::vector<std::string> refuter_names;
  CLI::App app{"Backdoor identification, matching estimators and refutation tests", "causalkit"};
  app.require_subcommand(1);

  // Accepts every spelling parse_estimator knows, including "backdoor." names.
  const CLI::Validator known_estimator(
      [](std::string& name) -> std::string {
        try {
          (void)parse_estimator(name);
          return {};
        } catch (const Error& e) {
          return e.what();
        }
      },
      "ESTIMATOR");
  const std::map<std::string, RefuterKind> refuters{
      {"random_common_cause", RefuterKind::RandomCommonCause},
      {"placebo_treatment", RefuterKind::PlaceboTreatment},
      {"data_subset", RefuterKind::DataSubset},
      {"bootstrap", RefuterKind::BootstrapSample},
  };
  const std::map<std::string, OutputFormat> formats{{"text", OutputFormat::Text}, {"json", OutputFormat::Json}};

  auto add_estimation = [&](CLI::App* sub) {
    sub->add_option("--data", cfg.data_path, "CSV input")->required();
    sub->add_option("--graph", cfg.graph_path, "causal graph (edge list)")->required();
    sub->add_option("--treatment", cfg.treatment, "binary treatment column")->required();
    sub->add_option("--outcome", cfg.outcome, "outcome column")->required();
    sub->add_option("--estimator", estimator_name, "estimation method")->check(known_estimator);
    sub->add_option("--n-strata", cfg.n_strata, "strata for propensity stratification")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--ci", cfg.ci, "attach a percentile bootstrap confidence interval");
    sub->add_option("--n-boot", cfg.n_boot, "bootstrap replicates")->check(CLI::PositiveNumber);
    sub->add_option("--level", cfg.ci_level, "confidence level")->check(CLI::Range(0.0, 0.999999));
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--format", format_name, "text or json")->check(CLI::IsMember(formats));
    sub->add_option("--threads", cfg.threads, "worker threads for replicates (0 = all cores)");
  };

  auto* analyze = app.add_subcommand("analyze", "identify and estimate the average treatment effect");
  add_estimation(analyze);

  auto* refute_cmd = app.add_subcommand("refute", "estimate, then run refutation tests");
  add_estimation(refute_cmd);
  refute_cmd->add_option("--refuter", refuter_names, "refuter to run (repeatable)")
      ->required()
      ->check(CLI::IsMember(refuters));
  refute_cmd->add_option("--n-sims", cfg.n_sims, "simulations per refuter")->check(CLI::PositiveNumber);
  refute_cmd->add_option("--fraction", cfg.fraction, "row fraction for data_subset")
      ->check(CLI::Range(0.0, 1.0));

  auto* simulate = app.add_subcommand("simulate", "write a synthetic student cohort");
  simulate->add_option("--n", cfg.n_students, "number of students")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", cfg.seed, "random seed")->required();
  simulate->add_option("--out", cfg.out_path, "CSV output path")->required();
  simulate->add_option("--confounding", cfg.confounding, "confounding strength");
  simulate->add_option("--graph-out", cfg.graph_out_path, "also write the matching causal graph");
  simulate->add_option("--scm-out", cfg.scm_out_path, "also write the generating model");
  simulate->add_option("--n-mc", cfg.n_mc, "Monte Carlo draws for the true ATE")->check(CLI::PositiveNumber);

  auto* histogram = app.add_subcommand("histogram", "text histogram of one column");
  histogram->add_option("--data", cfg.data_path, "CSV input")->required();
  histogram->add_option("--column", cfg.column, "column name")->required();
  histogram->add_option("--bins", cfg.bins, "number of bins")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  cfg.estimator = parse_estimator(estimator_name);
  cfg.format = formats.at(format_name);
  for (const auto& name : refuter_names) cfg.refuters.push_back(refuters.at(name));

  try {
    std::string text;
    if (*analyze) {
      text = run_analyze(cfg);
    } else if (*refute_cmd) {
      text = run_refute(cfg);
    } else if (*simulate) {
      text = run_simulate(cfg);
    } else {
      text = run_histogram(cfg);
    }
    out << text;
    out.flush();
    return 0;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace causalkit::cli
