#include "catdcov/simlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"
#include "catdcov/nulldist.hpp"
#include "json.hpp"

namespace catdcov {

using json = nlohmann::ordered_json;

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::screening: return "screening";
    case ExperimentKind::null: return "null";
    case ExperimentKind::alternative: return "alternative";
  }
  return "unknown";
}

std::string_view to_string(MassNormalization m) {
  switch (m) {
    case MassNormalization::proportional: return "proportional";
    case MassNormalization::reset_low: return "reset_low";
    case MassNormalization::none: return "none";
  }
  return "unknown";
}

std::string_view to_string(SamplingMode m) {
  return m == SamplingMode::independent_pairs ? "independent_pairs" : "shared_response";
}

namespace {

ExperimentKind parse_kind(std::string_view s) {
  if (s == "screening") return ExperimentKind::screening;
  if (s == "null") return ExperimentKind::null;
  if (s == "alternative") return ExperimentKind::alternative;
  throw InputError("unknown experiment kind '" + std::string(s) + "'");
}

MassNormalization parse_normalization(std::string_view s) {
  if (s == "proportional") return MassNormalization::proportional;
  if (s == "reset_low") return MassNormalization::reset_low;
  if (s == "none") return MassNormalization::none;
  throw InputError("unknown normalization '" + std::string(s) + "'");
}

SamplingMode parse_sampling(std::string_view s) {
  if (s == "independent_pairs") return SamplingMode::independent_pairs;
  if (s == "shared_response") return SamplingMode::shared_response;
  throw InputError("unknown sampling mode '" + std::string(s) + "'");
}

std::size_t uniform_index(RandomStream& stream, std::size_t m) {
  return std::min(m - 1, static_cast<std::size_t>(stream.uniform01() * static_cast<double>(m)));
}

// Runs body(i) for i in [0, count) across OpenMP threads and rethrows the
// exception of the smallest failing index.
template <class Body>
void parallel_indexed(std::size_t count, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::size_t SimulationSpec::relevant_count() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(features) * signal_fraction + 1e-9));
}

std::pair<double, double> SimulationSpec::cell_probs() const {
  return normalize_masses(rows * cols, high_cell_count, high_cell_prob, low_cell_prob, normalization);
}

std::pair<double, double> normalize_masses(std::size_t cells, std::size_t high_count, double high, double low,
                                           MassNormalization rule) {
  if (high_count > cells)
    throw InputError("high_cell_count " + std::to_string(high_count) + " exceeds the " + std::to_string(cells) + " cells");
  if (high < 0.0 || low < 0.0) throw InputError("cell masses must be non-negative");
  const double h = static_cast<double>(high_count);
  const double l = static_cast<double>(cells - high_count);
  const double total = h * high + l * low;
  switch (rule) {
    case MassNormalization::none:
      if (std::abs(total - 1.0) > JointPMF::kMassTolerance)
        throw InputError("cell masses total " + std::to_string(total) + ", not 1");
      return {high, low};
    case MassNormalization::proportional:
      if (!(total > 0.0)) throw InputError("cell masses total zero");
      return {high / total, low / total};
    case MassNormalization::reset_low: {
      const double rest = 1.0 - h * high;
      if (rest < -JointPMF::kMassTolerance) throw InputError("high cells alone exceed total mass 1");
      if (cells == high_count) {
        if (std::abs(rest) > JointPMF::kMassTolerance) throw InputError("all cells high but mass is not 1");
        return {high, 0.0};
      }
      return {high, std::max(0.0, rest) / l};
    }
  }
  return {high, low};
}

void validate(const SimulationSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) throw InputError("dimensions must be at least 2 x 2");
  if (spec.n < 4) throw InputError("n must be at least 4, got " + std::to_string(spec.n));
  if (spec.replicates < 1) throw InputError("replicates must be at least 1");
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) throw InputError("alpha must lie in (0, 1]");
  if (spec.kind == ExperimentKind::screening) {
    if (spec.features < 1) throw InputError("K must be at least 1");
    if (!(spec.signal_fraction >= 0.0 && spec.signal_fraction <= 1.0))
      throw InputError("signal_fraction must lie in [0, 1]");
    if (spec.estimators.empty()) throw InputError("no estimators requested");
  } else {
    if (spec.methods.empty()) throw InputError("no test methods requested");
    for (TestMethod m : spec.methods) {
      if (m != TestMethod::permutation && m != TestMethod::weighted_chisq && m != TestMethod::chisq_df1)
        throw InputError("method '" + std::string(to_string(m)) + "' is not available in test experiments");
      if (m == TestMethod::permutation && spec.permutations < 1) throw InputError("B must be at least 1");
      if (m == TestMethod::weighted_chisq && spec.null_draws < 1000) throw InputError("draws must be at least 1000");
    }
  }
  if (spec.kind != ExperimentKind::null) (void)spec.cell_probs();
}

SimulationSpec build_setting(std::string_view name, const SpecOverrides& overrides) {
  SimulationSpec s;
  s.name = std::string(name);
  const auto small = [&](ExperimentKind kind) {
    s.kind = kind;
    s.rows = s.cols = 8;
    s.high_cell_count = 10;
    s.high_cell_prob = 1.0 / 20.0;
    s.low_cell_prob = 1.0 / 108.0;
  };
  const auto large = [&](ExperimentKind kind) {
    s.kind = kind;
    s.rows = s.cols = 10;
    s.high_cell_count = 20;
    s.high_cell_prob = 1.0 / 50.0;
    s.low_cell_prob = 1.0 / 150.0;
  };
  const auto testing = [&](std::vector<std::size_t> grid, std::size_t replicates) {
    s.n_grid = std::move(grid);
    s.n = s.n_grid.front();
    s.replicates = replicates;
    s.features = 1;
    s.signal_fraction = 0.0;
  };

  if (name == "setting1" || name == "setting3") {
    small(ExperimentKind::screening);
    s.signal_fraction = name == "setting1" ? 0.05 : 0.10;
    s.n_grid = {25, 50, 75, 100};
  } else if (name == "setting2" || name == "setting4") {
    large(ExperimentKind::screening);
    s.signal_fraction = name == "setting2" ? 0.05 : 0.10;
    s.n_grid = {25, 50, 75, 100};
  } else if (name == "null1" || name == "null2") {
    const bool one = name == "null1";
    s.kind = ExperimentKind::null;
    s.rows = s.cols = one ? 8 : 10;
    s.high_cell_count = 0;
    s.high_cell_prob = 0.0;
    s.low_cell_prob = 1.0 / static_cast<double>(s.rows * s.cols);
    testing(one ? std::vector<std::size_t>{32, 64, 96, 128} : std::vector<std::size_t>{50, 100, 150, 200}, 5000);
    s.methods = {TestMethod::weighted_chisq, TestMethod::chisq_df1};
  } else if (name == "alt1") {
    small(ExperimentKind::alternative);
    testing({32, 64, 96, 128}, 2000);
    s.methods = {TestMethod::permutation, TestMethod::weighted_chisq, TestMethod::chisq_df1};
  } else if (name == "alt2") {
    large(ExperimentKind::alternative);
    testing({50, 100, 150, 200}, 2000);
    s.methods = {TestMethod::permutation, TestMethod::weighted_chisq, TestMethod::chisq_df1};
  } else {
    throw InputError("unknown setting '" + std::string(name) +
                     "' (expected setting1..setting4, null1, null2, alt1, alt2)");
  }
  if (s.kind == ExperimentKind::screening) s.n = s.n_grid.front();
  apply_overrides(s, overrides);
  return s;
}

void apply_overrides(SimulationSpec& s, const SpecOverrides& o) {
  if (o.n) s.n = *o.n;
  if (o.features) s.features = *o.features;
  if (o.replicates) s.replicates = *o.replicates;
  if (o.signal_fraction) s.signal_fraction = *o.signal_fraction;
  if (o.permutations) s.permutations = *o.permutations;
  if (o.null_draws) s.null_draws = *o.null_draws;
  if (o.alpha) s.alpha = *o.alpha;
  if (o.estimators) s.estimators = *o.estimators;
  if (o.methods) s.methods = *o.methods;
  if (o.normalization) s.normalization = *o.normalization;
  if (o.sampling) s.sampling = *o.sampling;
  if (o.seed) s.seed = *o.seed;
  validate(s);
}

std::string spec_to_json(const SimulationSpec& s) {
  json j;
  j["setting"] = s.name;
  j["kind"] = to_string(s.kind);
  j["I"] = s.rows;
  j["J"] = s.cols;
  j["K"] = s.features;
  j["signal_fraction"] = s.signal_fraction;
  j["n"] = s.n;
  j["n_grid"] = s.n_grid;
  j["replicates"] = s.replicates;
  j["high_cell_count"] = s.high_cell_count;
  j["high_cell_prob"] = s.high_cell_prob;
  j["low_cell_prob"] = s.low_cell_prob;
  j["normalization"] = to_string(s.normalization);
  j["estimators"] = json::array();
  for (Estimator e : s.estimators) j["estimators"].push_back(to_string(e));
  j["methods"] = json::array();
  for (TestMethod m : s.methods) j["methods"].push_back(to_string(m));
  j["B"] = s.permutations;
  j["draws"] = s.null_draws;
  j["alpha"] = s.alpha;
  j["sampling_mode"] = to_string(s.sampling);
  j["qq_reference_per_replicate"] = s.qq_reference_per_replicate;
  j["seed"] = s.seed;
  return j.dump(2);
}

SimulationSpec parse_spec_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("simulation config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("simulation config must be a JSON object");
  try {
    SimulationSpec s = j.contains("setting") ? build_setting(j["setting"].get<std::string>()) : SimulationSpec{};
    for (auto& [key, v] : j.items()) {
      if (key == "setting") continue;
      else if (key == "kind") s.kind = parse_kind(v.get<std::string>());
      else if (key == "I") s.rows = v.get<std::size_t>();
      else if (key == "J") s.cols = v.get<std::size_t>();
      else if (key == "K") s.features = v.get<std::size_t>();
      else if (key == "signal_fraction") s.signal_fraction = v.get<double>();
      else if (key == "n") s.n = v.get<std::size_t>();
      else if (key == "n_grid") s.n_grid = v.get<std::vector<std::size_t>>();
      else if (key == "replicates") s.replicates = v.get<std::size_t>();
      else if (key == "high_cell_count") s.high_cell_count = v.get<std::size_t>();
      else if (key == "high_cell_prob") s.high_cell_prob = v.get<double>();
      else if (key == "low_cell_prob") s.low_cell_prob = v.get<double>();
      else if (key == "normalization") s.normalization = parse_normalization(v.get<std::string>());
      else if (key == "estimators") {
        s.estimators.clear();
        for (auto& e : v) s.estimators.push_back(parse_estimator(e.get<std::string>()));
      } else if (key == "methods") {
        s.methods.clear();
        for (auto& m : v) s.methods.push_back(parse_test_method(m.get<std::string>()));
      } else if (key == "B") s.permutations = v.get<std::size_t>();
      else if (key == "draws") s.null_draws = v.get<std::size_t>();
      else if (key == "alpha") s.alpha = v.get<double>();
      else if (key == "sampling_mode") s.sampling = parse_sampling(v.get<std::string>());
      else if (key == "qq_reference_per_replicate") s.qq_reference_per_replicate = v.get<std::size_t>();
      else if (key == "seed") s.seed = v.get<Seed>();
      else throw InputError("unknown simulation config key '" + key + "'");
    }
    if (s.name.empty()) s.name = "custom";
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("simulation config has a field of the wrong type: ") + e.what());
  }
}

JointPMF gen_relevant_pmf(const SimulationSpec& spec, RandomStream& stream) {
  const std::size_t cells = spec.rows * spec.cols;
  const auto [high, low] = spec.cell_probs();
  std::vector<std::size_t> idx(cells);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> probs(cells, low);
  for (std::size_t h = 0; h < spec.high_cell_count; ++h) {
    std::swap(idx[h], idx[h + uniform_index(stream, cells - h)]);
    probs[idx[h]] = high;
  }
  return JointPMF(spec.rows, spec.cols, std::move(probs));
}

namespace {

JointPMF uniform_pmf(std::size_t rows, std::size_t cols) {
  return JointPMF(rows, cols, std::vector<double>(rows * cols, 1.0 / static_cast<double>(rows * cols)));
}

ContingencyTable draw_table(const JointPMF& pmf, std::size_t n, RandomStream& stream) {
  const CellSampler sampler(pmf.probs());
  ContingencyTable t(pmf.rows(), pmf.cols());
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t c = sampler.draw(stream);
    t.increment(c / pmf.cols(), c % pmf.cols());
  }
  return t;
}

// X | Y = y for every observed y, drawn from the feature's column conditionals.
ContingencyTable draw_table_given_response(const JointPMF& pmf, const std::vector<int>& response,
                                           RandomStream& stream) {
  std::vector<CellSampler> conditional;
  conditional.reserve(pmf.cols());
  std::vector<double> column(pmf.rows());
  for (std::size_t j = 0; j < pmf.cols(); ++j) {
    for (std::size_t i = 0; i < pmf.rows(); ++i) column[i] = pmf(i, j);
    conditional.emplace_back(column);
  }
  ContingencyTable t(pmf.rows(), pmf.cols());
  for (int y : response) {
    const auto j = static_cast<std::size_t>(y - 1);
    t.increment(conditional[j].draw(stream), j);
  }
  return t;
}

// Keeps the end points plus each point that moves fpr or tpr by at least step.
RocCurve thin_roc(const RocCurve& full, double step) {
  RocCurve out;
  out.auc = full.auc;
  for (std::size_t i = 0; i < full.points.size(); ++i) {
    const bool last = i + 1 == full.points.size();
    if (out.points.empty() || last || full.points[i].fpr - out.points.back().fpr >= step ||
        full.points[i].tpr - out.points.back().tpr >= step)
      out.points.push_back(full.points[i]);
  }
  return out;
}

}  // namespace

SimulationReport run_screening_experiment(const SimulationSpec& spec) {
  validate(spec);
  if (spec.kind != ExperimentKind::screening) throw InputError("run_screening_experiment needs a screening spec");
  const auto started = std::chrono::steady_clock::now();
  const std::size_t K = spec.features;
  const std::size_t R = spec.replicates;
  const std::size_t E = spec.estimators.size();
  const std::size_t relevant = spec.relevant_count();
  std::vector<bool> truth(K, false);
  std::fill(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(relevant), true);
  const JointPMF null_pmf = uniform_pmf(spec.rows, spec.cols);

  SimulationReport report;
  report.spec = spec;
  report.one_class_truth = relevant == 0 || relevant == K;
  report.per_replicate.assign(R, std::vector<EstimatorReplicate>(E));
  std::vector<std::vector<double>> pooled(E);

  std::vector<std::vector<double>> stats(E, std::vector<double>(K));
  for (std::size_t r = 0; r < R; ++r) {
    std::vector<int> response;
    if (spec.sampling == SamplingMode::shared_response) {
      auto stream = RandomStream::derive(spec.seed, {r});
      response.resize(spec.n);
      for (int& y : response) y = static_cast<int>(uniform_index(stream, spec.cols)) + 1;
    }
    parallel_indexed(K, [&](std::size_t k) {
      auto stream = RandomStream::derive(spec.seed, {r, k});
      const JointPMF pmf = truth[k] ? gen_relevant_pmf(spec, stream) : null_pmf;
      const ContingencyTable table = spec.sampling == SamplingMode::shared_response
                                         ? draw_table_given_response(pmf, response, stream)
                                         : draw_table(pmf, spec.n, stream);
      for (std::size_t e = 0; e < E; ++e) stats[e][k] = feature_statistic(table, spec.estimators[e]);
    });

    for (std::size_t e = 0; e < E; ++e) {
      auto& rep = report.per_replicate[r][e];
      pooled[e].insert(pooled[e].end(), stats[e].begin(), stats[e].end());
      try {
        const ChangePoint cp = changepoint_threshold(stats[e]);
        const auto chosen = select(stats[e], cp.threshold);
        rep.size_changepoint = chosen.size();
        if (!report.one_class_truth) {
          const SensSpec ss = sens_spec(chosen, truth);
          rep.sensitivity = ss.sensitivity;
          rep.specificity = ss.specificity;
        }
      } catch (const SelectorError&) {
      }
      try {
        rep.size_maxratio = select(stats[e], max_ratio_threshold(stats[e])).size();
      } catch (const SelectorError&) {
      }
      rep.auc = report.one_class_truth ? std::numeric_limits<double>::quiet_NaN() : roc_auc(stats[e], truth).auc;
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<bool> pooled_truth;
  if (!report.one_class_truth) {
    pooled_truth.reserve(K * R);
    for (std::size_t r = 0; r < R; ++r) pooled_truth.insert(pooled_truth.end(), truth.begin(), truth.end());
  }
  for (std::size_t e = 0; e < E; ++e) {
    EstimatorSummary s;
    s.estimator = spec.estimators[e];
    std::vector<double> auc, sens, spec_v, cp_size, mr_size;
    for (std::size_t r = 0; r < R; ++r) {
      const auto& rep = report.per_replicate[r][e];
      auc.push_back(rep.auc);
      if (rep.size_changepoint) {
        cp_size.push_back(static_cast<double>(*rep.size_changepoint));
        sens.push_back(rep.sensitivity);
        spec_v.push_back(rep.specificity);
      } else {
        ++s.changepoint_failures;
      }
      if (rep.size_maxratio) mr_size.push_back(static_cast<double>(*rep.size_maxratio));
      else ++s.maxratio_failures;
    }
    s.size_changepoint = mean_of(cp_size);
    s.size_maxratio = mean_of(mr_size);
    if (report.one_class_truth) {
      s.auc = s.auc_se = s.sensitivity = s.specificity = nan;
    } else {
      s.auc = mean_of(auc);
      double ss = 0.0;
      for (double a : auc) ss += (a - s.auc) * (a - s.auc);
      s.auc_se = R > 1 ? std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R)) : nan;
      s.sensitivity = mean_of(sens);
      s.specificity = mean_of(spec_v);
      s.pooled_roc = thin_roc(roc_auc(pooled[e], pooled_truth), 1e-3);
    }
    report.estimators.push_back(std::move(s));
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double chisq1_centered_quantile(double p) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(1.0), p) - 1.0;
}

SimulationReport run_test_experiment(const SimulationSpec& spec) {
  validate(spec);
  if (spec.kind == ExperimentKind::screening) throw InputError("run_test_experiment needs a null or alternative spec");
  const auto started = std::chrono::steady_clock::now();
  const std::size_t R = spec.replicates;
  const std::size_t M = spec.methods.size();
  const JointPMF null_pmf = uniform_pmf(spec.rows, spec.cols);

  std::vector<double> stat(R, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::vector<char>> reject(R, std::vector<char>(M, 0));
  std::vector<std::vector<double>> reference(R);

  parallel_indexed(R, [&](std::size_t r) {
    auto pmf_stream = RandomStream::derive(spec.seed, {r, 0});
    const JointPMF pmf = spec.kind == ExperimentKind::alternative ? gen_relevant_pmf(spec, pmf_stream) : null_pmf;
    auto sample_stream = RandomStream::derive(spec.seed, {r, 1});
    const PairedSample sample = sample_pmf(pmf, spec.n, sample_stream);
    const ContingencyTable table = table_from_sample(sample, spec.rows, spec.cols);

    std::optional<EigenWeightGrid> grid;
    try {
      stat[r] = bcdcor_stat(table);
      std::vector<double> row(table.rows()), col(table.cols());
      const double n = static_cast<double>(table.total());
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = static_cast<double>(table.row_margins()[i]) / n;
      for (std::size_t j = 0; j < col.size(); ++j) col[j] = static_cast<double>(table.col_margins()[j]) / n;
      grid = weight_grid_from_margins(row, col);
    } catch (const DegenerateError&) {
      stat[r] = std::numeric_limits<double>::quiet_NaN();
    }

    for (std::size_t m = 0; m < M; ++m) {
      double p = 1.0;  // degenerate replicates never reject below alpha = 1
      switch (spec.methods[m]) {
        case TestMethod::permutation:
          p = permutation_test(sample, spec.rows, spec.cols, PermutationStatistic::delta_tilde, spec.permutations,
                               derive_seed(spec.seed, {r, 3}))
                  .pvalue;
          break;
        case TestMethod::weighted_chisq:
          if (grid) p = pvalue_weighted(stat[r], *grid, spec.null_draws, derive_seed(spec.seed, {r, 2}));
          break;
        case TestMethod::chisq_df1:
          if (grid) p = pvalue_chi1(stat[r]);
          break;
        default: break;
      }
      reject[r][m] = p <= spec.alpha;
    }
    if (grid) reference[r] = sample_null(*grid, spec.qq_reference_per_replicate, derive_seed(spec.seed, {r, 4}));
  });

  SimulationReport report;
  report.spec = spec;
  report.statistics = stat;
  for (std::size_t m = 0; m < M; ++m) {
    MethodSummary s;
    s.method = spec.methods[m];
    for (std::size_t r = 0; r < R; ++r) s.rejections += static_cast<std::size_t>(reject[r][m]);
    s.rate = static_cast<double>(s.rejections) / static_cast<double>(R);
    s.se = std::sqrt(s.rate * (1.0 - s.rate) / static_cast<double>(R));
    report.methods.push_back(s);
  }
  std::vector<double> valid;
  for (std::size_t r = 0; r < R; ++r) {
    if (std::isnan(stat[r])) ++report.degenerate_replicates;
    else valid.push_back(stat[r]);
    report.qq_reference.insert(report.qq_reference.end(), reference[r].begin(), reference[r].end());
  }
  std::sort(valid.begin(), valid.end());
  std::vector<double> ref = report.qq_reference;
  std::sort(ref.begin(), ref.end());
  for (double p : {0.5, 0.9, 0.95, 0.99})
    report.quantiles.push_back({p, sorted_quantile(valid, p), sorted_quantile(ref, p), chisq1_centered_quantile(p)});
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

SimulationReport run_experiment(const SimulationSpec& spec) {
  return spec.kind == ExperimentKind::screening ? run_screening_experiment(spec) : run_test_experiment(spec);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_qq_csv(const std::vector<double>& sorted_stats, const std::vector<double>& sorted_ref, bool chisq1,
                  const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "theoretical,empirical\n";
  const auto N = static_cast<double>(sorted_stats.size());
  for (std::size_t i = 0; i < sorted_stats.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / N;
    const double theory = chisq1 ? chisq1_centered_quantile(p) : sorted_quantile(sorted_ref, p);
    out << fmt(theory) << ',' << fmt(sorted_stats[i]) << '\n';
  }
  finish(out, path);
}

bool report_empty(const SimulationReport& r) {
  return r.spec.kind == ExperimentKind::screening ? r.per_replicate.empty() : r.statistics.empty();
}

}  // namespace

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) out << fmt(p.threshold) << ',' << fmt(p.fpr) << ',' << fmt(p.tpr) << '\n';
  finish(out, path);
}

std::string summary_json(const SimulationReport& r) {
  if (report_empty(r)) throw InputError("report has no replicates");
  json j;
  j["setting"] = r.spec.name;
  j["kind"] = to_string(r.spec.kind);
  j["seed"] = r.spec.seed;
  j["n"] = r.spec.n;
  j["replicates"] = r.spec.replicates;
  j["spec"] = json::parse(spec_to_json(r.spec));
  if (r.spec.kind == ExperimentKind::screening) {
    j["K"] = r.spec.features;
    j["relevant"] = r.spec.relevant_count();
    j["one_class_truth"] = r.one_class_truth;
    j["estimators"] = json::array();
    for (const auto& s : r.estimators) {
      json e;
      e["estimator"] = to_string(s.estimator);
      e["auc"] = s.auc;
      e["auc_se"] = s.auc_se;
      e["sensitivity"] = s.sensitivity;
      e["specificity"] = s.specificity;
      e["selected_size_changepoint"] = s.size_changepoint;
      e["selected_size_maxratio"] = s.size_maxratio;
      e["changepoint_failures"] = s.changepoint_failures;
      e["maxratio_failures"] = s.maxratio_failures;
      j["estimators"].push_back(std::move(e));
    }
  } else {
    j["methods"] = json::array();
    for (const auto& m : r.methods) {
      json e;
      e["method"] = to_string(m.method);
      e["rejections"] = m.rejections;
      e["rate"] = m.rate;
      e["se"] = m.se;
      j["methods"].push_back(std::move(e));
    }
    j["degenerate_replicates"] = r.degenerate_replicates;
    j["quantiles"] = json::array();
    for (const auto& q : r.quantiles)
      j["quantiles"].push_back(
          {{"p", q.probability}, {"empirical", q.empirical}, {"weighted", q.weighted}, {"chisq1", q.chisq1}});
  }
  return j.dump(2) + "\n";
}

void emit_report(const SimulationReport& r, const std::filesystem::path& dir) {
  const std::string summary = summary_json(r);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
  {
    const auto path = dir / "summary.json";
    auto out = open_out(path);
    out << summary;
    finish(out, path);
  }
  if (r.spec.kind == ExperimentKind::screening) {
    if (r.one_class_truth) return;
    for (const auto& s : r.estimators)
      write_roc_csv(s.pooled_roc, dir / ("roc_" + std::string(to_string(s.estimator)) + ".csv"));
    return;
  }
  std::vector<double> stats;
  for (double t : r.statistics)
    if (!std::isnan(t)) stats.push_back(t);
  std::sort(stats.begin(), stats.end());
  std::vector<double> ref = r.qq_reference;
  std::sort(ref.begin(), ref.end());
  write_qq_csv(stats, ref, false, dir / "qq_weighted.csv");
  write_qq_csv(stats, ref, true, dir / "qq_chisq1.csv");
}

std::string summary_line(const SimulationReport& r) {
  char buf[256];
  std::string line = r.spec.name + " n=" + std::to_string(r.spec.n) + " replicates=" + std::to_string(r.spec.replicates);
  if (r.spec.kind == ExperimentKind::screening) {
    line += " K=" + std::to_string(r.spec.features) + " relevant=" + std::to_string(r.spec.relevant_count());
    for (const auto& s : r.estimators) {
      std::snprintf(buf, sizeof buf, " | %s AUC=%.4f sens=%.4f spec=%.4f size_changepoint=%.1f size_maxratio=%.1f",
                    std::string(to_string(s.estimator)).c_str(), s.auc, s.sensitivity, s.specificity,
                    s.size_changepoint, s.size_maxratio);
      line += buf;
    }
  } else {
    for (const auto& m : r.methods) {
      std::snprintf(buf, sizeof buf, " | %s rate=%.4f se=%.4f", std::string(to_string(m.method)).c_str(), m.rate,
                    m.se);
      line += buf;
    }
  }
  return line;
}

}  // namespace catdcov
