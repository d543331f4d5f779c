#pragma once

// Marginal feature screening for a categorical response: per-feature
// dependence statistics, data-driven thresholds and truth-relative metrics.
// Feature indices in this API are 0-based positions.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "catdcov/table.hpp"

namespace catdcov {

enum class Estimator { delta_hat, delta_tilde, eta_hat };
enum class Selector { changepoint, maxratio };

std::string_view to_string(Estimator e);
std::string_view to_string(Selector s);
/// CLI spellings: dcov, dcov-unbiased, chisq (enum spellings accepted too).
Estimator parse_estimator(std::string_view name);
Selector parse_selector(std::string_view name);

class FeatureMatrix {
 public:
  /// features[k][m] is the label of feature k for observation m. Levels are
  /// inferred as the maximum label when not given.
  FeatureMatrix(std::vector<int> response, std::vector<std::vector<int>> features);

  std::size_t observations() const noexcept { return response_.size(); }
  std::size_t feature_count() const noexcept { return features_.size(); }
  std::size_t response_levels() const noexcept { return response_levels_; }
  std::size_t feature_levels(std::size_t k) const { return feature_levels_.at(k); }
  std::span<const int> response() const noexcept { return response_; }
  std::span<const int> feature(std::size_t k) const { return features_.at(k); }

  /// (X_k, Y) contingency table.
  ContingencyTable marginal_table(std::size_t k) const;

 private:
  std::vector<int> response_;
  std::vector<std::vector<int>> features_;
  std::vector<std::size_t> feature_levels_;
  std::size_t response_levels_ = 0;
};

double feature_statistic(const ContingencyTable& table, Estimator estimator);

struct FeatureStats {
  std::vector<double> values;
  bool constant_response = false;  ///< all stats forced to 0
};

/// Per-feature statistic, OpenMP-parallel over features.
FeatureStats feature_stats(const FeatureMatrix& data, Estimator estimator);

/// Indices sorting stats descending; ties by ascending index.
std::vector<std::size_t> descending_order(std::span<const double> stats);

/// Largest consecutive ratio among the strictly positive stats sorted
/// ascending; returns the upper element of the winning pair (smallest rank on ties).
double max_ratio_threshold(std::span<const double> stats);

struct ChangePoint {
  double threshold = 0.0;
  std::size_t breakpoint_rank = 0;  ///< b: ranks 1..b form the upper segment
};

/// Exhaustive breakpoint search b in {2, ..., K-2} over the descending
/// sequence; each side gets its own least-squares line against rank and the
/// total RSS is minimised (smallest b on ties). C = (s_(b) + s_(b+1)) / 2.
ChangePoint changepoint_threshold(std::span<const double> stats);

/// {k : stats[k] >= threshold}, ascending.
std::vector<std::size_t> select(std::span<const double> stats, double threshold);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  ///< starts at (+inf, 0, 0), ends at (min, 1, 1)
  double auc = 0.0;
};

/// ROC over unique stat values; trapezoid AUC (equals the Mann-Whitney estimate with ties as 1/2).
RocCurve roc_auc(std::span<const double> stats, const std::vector<bool>& truth);

struct SensSpec {
  double sensitivity = 0.0;
  double specificity = 0.0;
};

SensSpec sens_spec(std::span<const std::size_t> selected, const std::vector<bool>& truth);

struct ScreeningReport {
  Estimator estimator = Estimator::delta_hat;
  Selector selector = Selector::changepoint;
  std::vector<double> stats;
  std::vector<std::size_t> order;
  std::optional<double> threshold_maxratio;
  std::optional<ChangePoint> changepoint;
  std::vector<std::size_t> selected;
  bool constant_response = false;
};

/// Builds a report from precomputed statistics. Throws when the active
/// selector cannot produce a threshold.
ScreeningReport screen_stats(std::vector<double> stats, Estimator estimator, Selector selector);
ScreeningReport screen(const FeatureMatrix& data, Estimator estimator, Selector selector);

}  // namespace catdcov
