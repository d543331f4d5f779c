#include "catdcov/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"
#include "catdcov/hyptest.hpp"
#include "catdcov/influence.hpp"
#include "catdcov/io.hpp"
#include "catdcov/screening.hpp"
#include "catdcov/simlab.hpp"
#include "json.hpp"

namespace catdcov {

namespace {

struct TestArgs {
  std::string input;
  std::string method = "weighted";
  std::string stat = "dcov";
  std::size_t permutations = kDefaultPermutations;
  std::size_t draws = kDefaultNullDraws;
  Seed seed = 0;
  CLI::Option* seed_opt = nullptr;
};

struct ScreenArgs {
  std::string input;
  std::string stats;
  std::string estimator = "dcov";
  std::string selector = "changepoint";
  std::string out;
  std::string truth;
  std::string roc;
};

struct SimulateArgs {
  std::string setting;
  std::string config;
  std::size_t n = 0, features = 0, replicates = 0, draws = 0, permutations = 0;
  double alpha = 0.0;
  std::string methods, estimators, normalization, sampling;
  std::string out_dir;
  Seed seed = 0;
  CLI::Option *n_opt = nullptr, *k_opt = nullptr, *rep_opt = nullptr, *draws_opt = nullptr, *b_opt = nullptr,
              *alpha_opt = nullptr, *seed_opt = nullptr;
};

struct InfluenceArgs {
  std::string input;
  std::string functional = "dcov";
  std::string out;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_test(const TestArgs& a, std::ostream& out) {
  const TestMethod method = parse_test_method(a.method);
  const bool stochastic = method == TestMethod::permutation || method == TestMethod::weighted_chisq;
  if (stochastic && a.seed_opt->count() == 0)
    throw InputError("--seed is required for method '" + std::string(to_string(method)) + "'");
  const SampleData d = read_sample_csv(std::filesystem::path(a.input));
  const ContingencyTable table = table_from_sample(d.sample, d.rows, d.cols);
  TestOutcome o;
  switch (method) {
    case TestMethod::permutation: {
      PermutationStatistic stat;
      if (a.stat == "dcov") stat = PermutationStatistic::delta_hat;
      else if (a.stat == "dcov-unbiased") stat = PermutationStatistic::delta_tilde;
      else throw InputError("--stat must be dcov or dcov-unbiased");
      o = permutation_test(d.sample, d.rows, d.cols, stat, a.permutations, a.seed);
      break;
    }
    case TestMethod::weighted_chisq: o = weighted_chi2_test(table, a.draws, a.seed); break;
    case TestMethod::chisq_df1: o = chi1_test(table); break;
    case TestMethod::pearson: o = pearson_test(table); break;
    case TestMethod::lrt: o = lrt_test(table); break;
  }
  out << to_json_line(o) << '\n';
  return kExitOk;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InputError("write to '" + path + "' failed");
}

int cmd_screen(const ScreenArgs& a, std::ostream& out) {
  const Estimator est = parse_estimator(a.estimator);
  const Selector sel = parse_selector(a.selector);
  if (a.input.empty() == a.stats.empty()) throw InputError("give exactly one of a feature CSV or --stats");
  const ScreeningReport report = a.stats.empty() ? screen(read_feature_csv(std::filesystem::path(a.input)), est, sel)
                                                 : screen_stats(read_stats_csv(a.stats), est, sel);
  auto j = nlohmann::ordered_json::parse(screening_report_json(report));
  if (!a.truth.empty()) {
    const auto truth = read_truth_csv(a.truth);
    const RocCurve roc = roc_auc(report.stats, truth);
    const SensSpec ss = sens_spec(report.selected, truth);
    j["auc"] = roc.auc;
    j["sensitivity"] = ss.sensitivity;
    j["specificity"] = ss.specificity;
    if (!a.roc.empty()) write_roc_csv(roc, a.roc);
  } else if (!a.roc.empty()) {
    throw InputError("--roc needs --truth");
  }
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) out << text;
  else write_text(a.out, text);
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.setting.empty() == a.config.empty()) throw InputError("give exactly one of --setting or --config");
  if (a.seed_opt->count() == 0) throw InputError("--seed is required for simulate");
  SimulationSpec spec;
  if (!a.config.empty()) {
    std::ifstream f(a.config, std::ios::binary);
    if (!f) throw InputError("cannot open '" + a.config + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    spec = parse_spec_json(buf.str());
  } else {
    spec = build_setting(a.setting);
  }
  SpecOverrides o;
  o.seed = a.seed;
  if (a.n_opt->count()) o.n = a.n;
  if (a.k_opt->count()) o.features = a.features;
  if (a.rep_opt->count()) o.replicates = a.replicates;
  if (a.draws_opt->count()) o.null_draws = a.draws;
  if (a.b_opt->count()) o.permutations = a.permutations;
  if (a.alpha_opt->count()) o.alpha = a.alpha;
  if (!a.methods.empty()) {
    std::vector<TestMethod> m;
    for (const auto& s : split_list(a.methods)) m.push_back(parse_test_method(s));
    o.methods = m;
  }
  if (!a.estimators.empty()) {
    std::vector<Estimator> e;
    for (const auto& s : split_list(a.estimators)) e.push_back(parse_estimator(s));
    o.estimators = e;
  }
  if (!a.normalization.empty() || !a.sampling.empty()) {
    // reuse the JSON field parsers
    nlohmann::json j = nlohmann::json::parse(spec_to_json(spec));
    if (!a.normalization.empty()) j["normalization"] = a.normalization;
    if (!a.sampling.empty()) j["sampling_mode"] = a.sampling;
    const SimulationSpec parsed = parse_spec_json(j.dump());
    o.normalization = parsed.normalization;
    o.sampling = parsed.sampling;
  }
  apply_overrides(spec, o);

  const SimulationReport report = run_experiment(spec);
  if (!a.out_dir.empty()) emit_report(report, a.out_dir);
  out << summary_line(report) << '\n';
  err << "runtime " << report.runtime_seconds << " s\n";
  return kExitOk;
}

int cmd_influence(const InfluenceArgs& a, std::ostream& out) {
  Functional f;
  if (a.functional == "dcov") f = Functional::delta;
  else if (a.functional == "chisq") f = Functional::eta;
  else throw InputError("--functional must be dcov or chisq");
  const JointPMF pmf = read_pmf_json(std::filesystem::path(a.input));
  const InfluenceSurface s = gross_error_sensitivity(f, pmf);
  if (!a.out.empty()) {
    std::ofstream csv(a.out, std::ios::binary);
    if (!csv) throw InputError("cannot open '" + a.out + "' for writing");
    write_influence_csv(s, csv);
    if (!csv) throw InputError("write to '" + a.out + "' failed");
  }
  nlohmann::ordered_json j;
  j["functional"] = a.functional;
  j["I"] = s.rows;
  j["J"] = s.cols;
  j["gamma"] = std::isfinite(s.gamma) ? nlohmann::ordered_json(s.gamma) : nlohmann::ordered_json("inf");
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distance covariance tools for categorical data", "catdcov"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "OpenMP threads (0 = runtime default); never changes results")
      ->check(CLI::NonNegativeNumber);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Independence test on a two-column sample CSV (header x,y)");
  test->add_option("input", ta.input, "sample CSV")->required();
  test->add_option("--method", ta.method, "permutation | weighted | chisq1 | pearson | lrt")->capture_default_str();
  test->add_option("--stat", ta.stat, "permutation statistic: dcov | dcov-unbiased")->capture_default_str();
  test->add_option("--B", ta.permutations, "permutations")->capture_default_str()->check(CLI::PositiveNumber);
  test->add_option("--draws", ta.draws, "Monte Carlo null draws")->capture_default_str();
  ta.seed_opt = test->add_option("--seed", ta.seed, "master seed (required for permutation and weighted)");
  test->add_option("--workers", workers, "OpenMP threads")->check(CLI::NonNegativeNumber);

  ScreenArgs sa;
  auto* scr = app.add_subcommand("screen", "Marginal screening of a response+features CSV");
  scr->add_option("input", sa.input, "feature CSV: response column then K feature columns");
  scr->add_option("--stats", sa.stats, "precomputed statistics CSV instead of a feature CSV");
  scr->add_option("--estimator", sa.estimator, "dcov | dcov-unbiased | chisq")->capture_default_str();
  scr->add_option("--selector", sa.selector, "changepoint | maxratio")->capture_default_str();
  scr->add_option("--out", sa.out, "report JSON path (default stdout)");
  scr->add_option("--truth", sa.truth, "0/1 relevance CSV; adds AUC, sensitivity, specificity");
  scr->add_option("--roc", sa.roc, "ROC CSV path (needs --truth)");
  scr->add_option("--workers", workers, "OpenMP threads")->check(CLI::NonNegativeNumber);

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "Run a seeded simulation experiment");
  sim->add_option("--setting", ma.setting, "setting1..setting4 | null1 | null2 | alt1 | alt2");
  sim->add_option("--config", ma.config, "SimulationSpec JSON");
  ma.n_opt = sim->add_option("--n", ma.n, "sample size");
  ma.k_opt = sim->add_option("--K", ma.features, "feature count (screening)");
  ma.rep_opt = sim->add_option("--replicates", ma.replicates, "replicates");
  ma.draws_opt = sim->add_option("--draws", ma.draws, "weighted-test null draws per replicate");
  ma.b_opt = sim->add_option("--B", ma.permutations, "permutations per replicate");
  ma.alpha_opt = sim->add_option("--alpha", ma.alpha, "test level");
  sim->add_option("--methods", ma.methods, "comma list: permutation,weighted,chisq1");
  sim->add_option("--estimators", ma.estimators, "comma list: dcov,dcov-unbiased,chisq");
  sim->add_option("--normalization", ma.normalization, "proportional | reset_low | none");
  sim->add_option("--sampling", ma.sampling, "independent_pairs | shared_response");
  ma.seed_opt = sim->add_option("--seed", ma.seed, "master seed (required)");
  sim->add_option("--out-dir", ma.out_dir, "directory for summary.json and CSV data");
  sim->add_option("--workers", workers, "OpenMP threads")->check(CLI::NonNegativeNumber);

  InfluenceArgs ia;
  auto* inf = app.add_subcommand("influence", "Influence-function grid and gross error sensitivity of a pmf");
  inf->add_option("input", ia.input, "pmf JSON {\"probs\": [[...]]}")->required();
  inf->add_option("--functional", ia.functional, "dcov | chisq")->capture_default_str();
  inf->add_option("--out", ia.out, "CSV path for the x,y,value grid");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (workers > 0) omp_set_num_threads(workers);
  try {
    if (*test) return cmd_test(ta, out);
    if (*scr) return cmd_screen(sa, out);
    if (*sim) return cmd_simulate(ma, out, err);
    if (*inf) return cmd_influence(ia, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    // insufficient sample, degenerate statistic, selector, metric, singular influence
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace catdcov
