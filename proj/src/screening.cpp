#include "catdcov/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"

namespace catdcov {

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::delta_hat: return "delta_hat";
    case Estimator::delta_tilde: return "delta_tilde";
    case Estimator::eta_hat: return "eta_hat";
  }
  return "unknown";
}

std::string_view to_string(Selector s) {
  return s == Selector::changepoint ? "changepoint" : "maxratio";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "dcov" || name == "delta_hat") return Estimator::delta_hat;
  if (name == "dcov-unbiased" || name == "delta_tilde") return Estimator::delta_tilde;
  if (name == "chisq" || name == "eta_hat") return Estimator::eta_hat;
  throw InputError("unknown estimator '" + std::string(name) + "' (expected dcov, dcov-unbiased or chisq)");
}

Selector parse_selector(std::string_view name) {
  if (name == "changepoint") return Selector::changepoint;
  if (name == "maxratio") return Selector::maxratio;
  throw InputError("unknown selector '" + std::string(name) + "' (expected changepoint or maxratio)");
}

namespace {

std::size_t max_label(const std::vector<int>& labels, const std::string& what) {
  int top = 0;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (labels[m] < 1)
      throw InputError(what + ": label " + std::to_string(labels[m]) + " at observation " +
                       std::to_string(m + 1) + " is below 1");
    top = std::max(top, labels[m]);
  }
  return static_cast<std::size_t>(top);
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::vector<int> response, std::vector<std::vector<int>> features)
    : response_(std::move(response)), features_(std::move(features)) {
  response_levels_ = max_label(response_, "response");
  feature_levels_.reserve(features_.size());
  for (std::size_t k = 0; k < features_.size(); ++k) {
    if (features_[k].size() != response_.size())
      throw InputError("feature " + std::to_string(k + 1) + " has " + std::to_string(features_[k].size()) +
                       " observations, response has " + std::to_string(response_.size()));
    feature_levels_.push_back(max_label(features_[k], "feature " + std::to_string(k + 1)));
  }
}

ContingencyTable FeatureMatrix::marginal_table(std::size_t k) const {
  const auto& x = features_.at(k);
  ContingencyTable table(feature_levels_[k], response_levels_);
  for (std::size_t m = 0; m < response_.size(); ++m)
    table.increment(static_cast<std::size_t>(x[m] - 1), static_cast<std::size_t>(response_[m] - 1));
  return table;
}

double feature_statistic(const ContingencyTable& table, Estimator estimator) {
  switch (estimator) {
    case Estimator::delta_hat: return delta_hat(table);
    case Estimator::delta_tilde: return delta_tilde(table);
    case Estimator::eta_hat: return pearson_chi2(table).eta_hat;
  }
  return 0.0;
}

FeatureStats feature_stats(const FeatureMatrix& data, Estimator estimator) {
  const std::size_t n = data.observations();
  if (n == 0) throw InsufficientSampleError("feature_stats: no observations");
  if (estimator == Estimator::delta_tilde && n < 4)
    throw InsufficientSampleError("feature_stats: delta_tilde needs n >= 4, got " + std::to_string(n));

  FeatureStats out;
  const std::size_t K = data.feature_count();
  out.values.assign(K, 0.0);
  auto resp = data.response();
  out.constant_response = std::all_of(resp.begin(), resp.end(), [&](int y) { return y == resp[0]; });
  if (out.constant_response) return out;

  const auto K_signed = static_cast<std::ptrdiff_t>(K);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < K_signed; ++k)
    out.values[static_cast<std::size_t>(k)] =
        feature_statistic(data.marginal_table(static_cast<std::size_t>(k)), estimator);
  return out;
}

std::vector<std::size_t> descending_order(std::span<const double> stats) {
  std::vector<std::size_t> idx(stats.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return stats[a] > stats[b]; });
  return idx;
}

double max_ratio_threshold(std::span<const double> stats) {
  std::vector<double> pos;
  for (double s : stats)
    if (s > 0.0) pos.push_back(s);
  if (pos.size() < 2)
    throw SelectorError("max-ratio selector needs at least 2 positive statistics, got " +
                        std::to_string(pos.size()));
  std::sort(pos.begin(), pos.end());
  std::size_t best = 0;
  double best_ratio = pos[1] / pos[0];
  for (std::size_t r = 1; r + 1 < pos.size(); ++r) {
    const double ratio = pos[r + 1] / pos[r];
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = r;
    }
  }
  return pos[best + 1];
}

namespace {

// Prefix sums of centred rank/value moments; segment RSS of a free line in O(1).
struct SegmentFitter {
  std::vector<double> sx, sy, sxx, syy, sxy;

  explicit SegmentFitter(const std::vector<double>& y) {
    const std::size_t K = y.size();
    const double xbar = (static_cast<double>(K) + 1.0) / 2.0;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(K);
    sx.assign(K + 1, 0.0);
    sy = sxx = syy = sxy = sx;
    for (std::size_t i = 0; i < K; ++i) {
      const double x = static_cast<double>(i + 1) - xbar;
      const double v = y[i] - ybar;
      sx[i + 1] = sx[i] + x;
      sy[i + 1] = sy[i] + v;
      sxx[i + 1] = sxx[i] + x * x;
      syy[i + 1] = syy[i] + v * v;
      sxy[i + 1] = sxy[i] + x * v;
    }
  }

  // ranks lo+1 .. hi (half-open on 0-based positions [lo, hi))
  double rss(std::size_t lo, std::size_t hi) const {
    const double m = static_cast<double>(hi - lo);
    const double Sx = sx[hi] - sx[lo], Sy = sy[hi] - sy[lo];
    const double vx = (sxx[hi] - sxx[lo]) - Sx * Sx / m;
    const double vy = (syy[hi] - syy[lo]) - Sy * Sy / m;
    const double cxy = (sxy[hi] - sxy[lo]) - Sx * Sy / m;
    return std::max(0.0, vx > 0.0 ? vy - cxy * cxy / vx : vy);
  }

  double total() const { return syy.back() - sy.back() * sy.back() / static_cast<double>(sy.size() - 1); }
};

}  // namespace

ChangePoint changepoint_threshold(std::span<const double> stats) {
  const std::size_t K = stats.size();
  if (K < 4) throw SelectorError("change-point selector needs K >= 4, got " + std::to_string(K));
  std::vector<double> s(stats.begin(), stats.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  if (s.front() == s.back()) throw SelectorError("change-point selector: all statistics equal, breakpoint undefined");

  const SegmentFitter fit(s);
  const double tol = 1e-10 * std::max(fit.total(), std::numeric_limits<double>::min());
  std::size_t best_b = 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 2; b + 2 <= K; ++b) {
    const double rss = fit.rss(0, b) + fit.rss(b, K);
    if (rss < best - tol) {
      best = rss;
      best_b = b;
    }
  }
  return {(s[best_b - 1] + s[best_b]) / 2.0, best_b};
}

std::vector<std::size_t> select(std::span<const double> stats, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < stats.size(); ++k)
    if (stats[k] >= threshold) out.push_back(k);
  return out;
}

namespace {

std::pair<std::size_t, std::size_t> class_sizes(std::size_t K, const std::vector<bool>& truth) {
  if (truth.size() != K)
    throw MetricError("truth vector has length " + std::to_string(truth.size()) + ", expected " + std::to_string(K));
  const auto pos = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
  if (pos == 0 || pos == K) throw MetricError("truth must contain at least one relevant and one irrelevant feature");
  return {pos, K - pos};
}

}  // namespace

RocCurve roc_auc(std::span<const double> stats, const std::vector<bool>& truth) {
  const auto [P, N] = class_sizes(stats.size(), truth);
  const auto order = descending_order(stats);
  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double v = stats[order[i]];
    for (; i < order.size() && stats[order[i]] == v; ++i) (truth[order[i]] ? tp : fp)++;
    const RocPoint next{v, static_cast<double>(fp) / static_cast<double>(N),
                        static_cast<double>(tp) / static_cast<double>(P)};
    const RocPoint& prev = curve.points.back();
    curve.auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) / 2.0;
    curve.points.push_back(next);
  }
  return curve;
}

SensSpec sens_spec(std::span<const std::size_t> selected, const std::vector<bool>& truth) {
  const auto [P, N] = class_sizes(truth.size(), truth);
  std::size_t tp = 0, fp = 0;
  for (std::size_t k : selected) {
    if (k >= truth.size()) throw MetricError("selected index " + std::to_string(k) + " out of range");
    (truth[k] ? tp : fp)++;
  }
  return {static_cast<double>(tp) / static_cast<double>(P),
          static_cast<double>(N - fp) / static_cast<double>(N)};
}

ScreeningReport screen_stats(std::vector<double> stats, Estimator estimator, Selector selector) {
  ScreeningReport r;
  r.estimator = estimator;
  r.selector = selector;
  r.stats = std::move(stats);
  r.order = descending_order(r.stats);
  // the inactive selector is reported when defined
  try {
    r.threshold_maxratio = max_ratio_threshold(r.stats);
  } catch (const SelectorError&) {
    if (selector == Selector::maxratio) throw;
  }
  try {
    r.changepoint = changepoint_threshold(r.stats);
  } catch (const SelectorError&) {
    if (selector == Selector::changepoint) throw;
  }
  const double c = selector == Selector::maxratio ? *r.threshold_maxratio : r.changepoint->threshold;
  r.selected = select(r.stats, c);
  return r;
}

ScreeningReport screen(const FeatureMatrix& data, Estimator estimator, Selector selector) {
  auto fs = feature_stats(data, estimator);
  if (fs.constant_response) {
    ScreeningReport r;
    r.estimator = estimator;
    r.selector = selector;
    r.stats = std::move(fs.values);
    r.order = descending_order(r.stats);
    r.constant_response = true;
    return r;
  }
  return screen_stats(std::move(fs.values), estimator, selector);
}

}  // namespace catdcov
