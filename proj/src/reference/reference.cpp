#include "catdcov/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "catdcov/errors.hpp"

namespace catdcov::reference {

std::vector<double> feature_stats(const FeatureMatrix& data, Estimator estimator) {
  std::vector<double> out(data.feature_count(), 0.0);
  auto resp = data.response();
  if (std::all_of(resp.begin(), resp.end(), [&](int y) { return y == resp[0]; })) return out;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = feature_statistic(data.marginal_table(k), estimator);
  return out;
}

std::size_t permutation_exceedances(const PairedSample& sample, std::size_t rows, std::size_t cols,
                                    PermutationStatistic stat, double observed, std::size_t permutations, Seed seed) {
  std::size_t hits = 0;
  for (std::size_t b = 0; b < permutations; ++b) {
    PairedSample shuffled = sample;
    auto stream = RandomStream::derive(seed, {b});
    std::shuffle(shuffled.y.begin(), shuffled.y.end(), stream.engine());
    if (permutation_statistic(table_from_sample(shuffled, rows, cols), stat) >= observed) ++hits;
  }
  return hits;
}

std::vector<double> sample_null(const EigenWeightGrid& grid, std::size_t draws, Seed seed) {
  const std::vector<double> w = grid.nonzero_weights();
  std::vector<double> out;
  out.reserve(draws);
  for (std::size_t block = 0; out.size() < draws; ++block) {
    auto stream = RandomStream::derive(seed, {block});
    for (std::size_t d = 0; d < kNullBlockSize && out.size() < draws; ++d) {
      double s = 0.0;
      for (double wl : w) {
        const double z = stream.normal();
        s += wl * (z * z - 1.0);
      }
      out.push_back(s);
    }
  }
  return out;
}

InfluenceSurface gross_error_sensitivity(Functional f, const JointPMF& pmf) {
  InfluenceSurface out{pmf.rows(), pmf.cols(), {}, 0.0};
  for (std::size_t i = 0; i < pmf.rows(); ++i)
    for (std::size_t j = 0; j < pmf.cols(); ++j) {
      double v;
      try {
        v = f == Functional::delta ? if_delta(pmf, i + 1, j + 1) : if_eta(pmf, i + 1, j + 1);
      } catch (const SingularInfluenceError&) {
        v = std::numeric_limits<double>::infinity();
      }
      out.values.push_back(v);
      out.gamma = std::max(out.gamma, std::abs(v));
    }
  return out;
}

namespace {

double line_rss(const std::vector<double>& s, std::size_t lo, std::size_t hi) {
  const double m = static_cast<double>(hi - lo);
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    xbar += static_cast<double>(i + 1);
    ybar += s[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxx += (static_cast<double>(i + 1) - xbar) * (static_cast<double>(i + 1) - xbar);
    sxy += (static_cast<double>(i + 1) - xbar) * (s[i] - ybar);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double rss = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double r = s[i] - ybar - slope * (static_cast<double>(i + 1) - xbar);
    rss += r * r;
  }
  return rss;
}

}  // namespace

ChangePoint changepoint_threshold(const std::vector<double>& stats) {
  const std::size_t K = stats.size();
  if (K < 4) throw SelectorError("K < 4");
  std::vector<double> s(stats);
  std::sort(s.begin(), s.end(), std::greater<>());
  if (s.front() == s.back()) throw SelectorError("flat sequence");
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(K);
  double tss = 0.0;
  for (double v : s) tss += (v - mean) * (v - mean);
  const double tol = 1e-10 * tss;
  std::size_t best_b = 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 2; b + 2 <= K; ++b) {
    const double rss = line_rss(s, 0, b) + line_rss(s, b, K);
    if (rss < best - tol) {
      best = rss;
      best_b = b;
    }
  }
  return {(s[best_b - 1] + s[best_b]) / 2.0, best_b};
}

}  // namespace catdcov::reference
