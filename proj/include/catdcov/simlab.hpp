#pragma once

// Seeded simulation engine for the screening settings (1-4), the null
// settings and the alternative settings. Every random quantity is drawn from a
// substream derived from (seed, replicate, feature or stage), so reports do not
// depend on the number of OpenMP threads.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catdcov/hyptest.hpp"
#include "catdcov/random.hpp"
#include "catdcov/screening.hpp"
#include "catdcov/table.hpp"

namespace catdcov {

enum class ExperimentKind { screening, null, alternative };

/// How printed cell masses that do not total 1 are repaired.
///   proportional: divide every cell by the printed total
///   reset_low:    keep high cells, set low cells to (1 - H p_high) / (IJ - H)
///   none:         masses must already total 1
enum class MassNormalization { proportional, reset_low, none };

/// independent_pairs: each feature's (X_k, Y) sample is drawn from its own joint.
/// shared_response: one Y sample per replicate (uniform), X_k | Y from the
/// feature's conditionals. Deviates from the stated joints when their Y margin is not uniform.
enum class SamplingMode { independent_pairs, shared_response };

std::string_view to_string(ExperimentKind k);
std::string_view to_string(MassNormalization m);
std::string_view to_string(SamplingMode m);

struct SimulationSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::screening;
  std::size_t rows = 8;  ///< I_k (screening) or I
  std::size_t cols = 8;  ///< J
  std::size_t features = 2000;
  double signal_fraction = 0.05;
  std::size_t n = 25;
  std::vector<std::size_t> n_grid;  ///< sample sizes of the original design
  std::size_t replicates = 50;
  std::size_t high_cell_count = 10;
  double high_cell_prob = 1.0 / 20.0;  ///< as printed, before normalization
  double low_cell_prob = 1.0 / 108.0;  ///< as printed, before normalization
  MassNormalization normalization = MassNormalization::proportional;
  std::vector<Estimator> estimators{Estimator::delta_hat, Estimator::eta_hat};
  std::vector<TestMethod> methods;
  std::size_t permutations = 199;
  std::size_t null_draws = 10000;
  double alpha = 0.05;
  SamplingMode sampling = SamplingMode::independent_pairs;
  std::size_t qq_reference_per_replicate = 50;
  Seed seed = 0;

  std::size_t relevant_count() const;
  /// (high, low) cell probabilities after the normalization rule.
  std::pair<double, double> cell_probs() const;
};

struct SpecOverrides {
  std::optional<std::size_t> n;
  std::optional<std::size_t> features;
  std::optional<std::size_t> replicates;
  std::optional<double> signal_fraction;
  std::optional<std::size_t> permutations;
  std::optional<std::size_t> null_draws;
  std::optional<double> alpha;
  std::optional<std::vector<Estimator>> estimators;
  std::optional<std::vector<TestMethod>> methods;
  std::optional<MassNormalization> normalization;
  std::optional<SamplingMode> sampling;
  std::optional<Seed> seed;
};

/// Names: setting1..setting4, null1, null2, alt1, alt2.
SimulationSpec build_setting(std::string_view name, const SpecOverrides& overrides = {});

/// Applies overrides and validates.
void apply_overrides(SimulationSpec& spec, const SpecOverrides& overrides);

/// Repairs printed masses with the given rule; returns the final (high, low).
/// Throws InputError on infeasible masses.
std::pair<double, double> normalize_masses(std::size_t cells, std::size_t high_count, double high, double low,
                                           MassNormalization rule);

/// Throws InputError describing the first invalid field.
void validate(const SimulationSpec& spec);

/// JSON round trip. Parsing starts from build_setting(json["setting"]) when
/// present, otherwise from a default-constructed spec.
SimulationSpec parse_spec_json(std::string_view text);
std::string spec_to_json(const SimulationSpec& spec);

/// high_cell_count cells chosen uniformly without replacement at
/// high_cell_prob, the rest at low_cell_prob.
JointPMF gen_relevant_pmf(const SimulationSpec& spec, RandomStream& stream);

struct EstimatorReplicate {
  double auc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  std::optional<std::size_t> size_changepoint;
  std::optional<std::size_t> size_maxratio;
};

struct EstimatorSummary {
  Estimator estimator = Estimator::delta_hat;
  double auc = 0.0;
  double auc_se = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double size_changepoint = 0.0;
  double size_maxratio = 0.0;
  std::size_t changepoint_failures = 0;
  std::size_t maxratio_failures = 0;
  RocCurve pooled_roc;  ///< over all replicates' statistics, thinned
};

struct MethodSummary {
  TestMethod method = TestMethod::weighted_chisq;
  std::size_t rejections = 0;
  double rate = 0.0;
  double se = 0.0;  ///< binomial sqrt(rate (1 - rate) / replicates)
};

struct QuantileComparison {
  double probability = 0.0;
  double empirical = 0.0;
  double weighted = 0.0;
  double chisq1 = 0.0;
};

struct SimulationReport {
  SimulationSpec spec;
  bool one_class_truth = false;

  // screening
  std::vector<std::vector<EstimatorReplicate>> per_replicate;  ///< [replicate][estimator]
  std::vector<EstimatorSummary> estimators;

  // null / alternative
  std::vector<MethodSummary> methods;
  std::size_t degenerate_replicates = 0;
  std::vector<double> statistics;    ///< bias-corrected statistic per replicate, NaN if degenerate
  std::vector<double> qq_reference;  ///< pooled weighted-law draws from each replicate's estimated margins
  std::vector<QuantileComparison> quantiles;

  double runtime_seconds = 0.0;  ///< informational, never written to report files
};

SimulationReport run_screening_experiment(const SimulationSpec& spec);
SimulationReport run_test_experiment(const SimulationSpec& spec);
/// Dispatches on spec.kind.
SimulationReport run_experiment(const SimulationSpec& spec);

/// Linear-interpolation quantile of a sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double p);
/// Quantile of chi2_1 - 1.
double chisq1_centered_quantile(double p);

/// Writes summary.json, roc_<estimator>.csv (screening) and
/// qq_weighted.csv / qq_chisq1.csv (null/alternative) into dir.
/// Byte-identical for identical reports. Throws on an empty replicate list or I/O failure.
void emit_report(const SimulationReport& report, const std::filesystem::path& dir);
std::string summary_json(const SimulationReport& report);
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);
/// One human-readable line with the aggregate metrics.
std::string summary_line(const SimulationReport& report);

}  // namespace catdcov
