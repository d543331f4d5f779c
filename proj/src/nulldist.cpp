#include "catdcov/nulldist.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "catdcov/errors.hpp"

namespace catdcov {

namespace {

constexpr double kZeroEigen = 1e-12;

void validate_margin(std::span<const double> margin) {
  if (margin.empty()) throw InputError("empty marginal distribution");
  double s = 0.0;
  for (double p : margin) {
    if (!(p >= 0.0)) throw InputError("marginal probability is negative");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InputError("marginal probabilities do not sum to 1");
}

void clamp_small(std::vector<double>& v) {
  for (double& x : v)
    if (std::abs(x) <= kZeroEigen) x = 0.0;
}

double sum_sq(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

std::vector<double> marginal_eigvals(std::span<const double> margin) {
  validate_margin(margin);
  const auto k = static_cast<Eigen::Index>(margin.size());
  Eigen::MatrixXd s(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index l = 0; l < k; ++l) s(i, l) = margin[i] * margin[l];
    s(i, i) -= margin[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
  std::sort(out.begin(), out.end());
  clamp_small(out);
  return out;
}

std::vector<double> marginal_eigvals_closed_form(std::span<const double> margin) {
  validate_margin(margin);
  std::vector<double> out;
  switch (margin.size()) {
    case 1:
      out = {0.0};
      break;
    case 2:
      out = {-2.0 * margin[0] * margin[1], 0.0};
      break;
    case 3: {
      const double p1 = margin[0], p2 = margin[1], p3 = margin[2];
      const double e2 = p1 * p2 + p1 * p3 + p2 * p3;
      const double disc = p1 * p1 * p2 * p2 + p1 * p1 * p3 * p3 + p2 * p2 * p3 * p3 - p1 * p2 * p3;
      const double root = std::sqrt(std::max(0.0, disc));
      out = {-e2 - root, -e2 + root, 0.0};
      break;
    }
    default:
      throw InputError("closed-form eigenvalues exist only for at most 3 categories");
  }
  clamp_small(out);
  return out;
}

double EigenWeightGrid::weight_sum() const {
  const double sl = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  const double sm = std::accumulate(mu.begin(), mu.end(), 0.0);
  return sl * sm / std::sqrt(sum_sq(lambda) * sum_sq(mu));
}

std::vector<double> EigenWeightGrid::nonzero_weights() const {
  std::vector<double> w;
  for (double v : omega)
    if (std::abs(v) > kZeroEigen) w.push_back(v);
  return w;
}

EigenWeightGrid weight_grid(std::span<const double> lambda, std::span<const double> mu) {
  EigenWeightGrid g{{lambda.begin(), lambda.end()}, {mu.begin(), mu.end()}, {}};
  clamp_small(g.lambda);
  clamp_small(g.mu);
  const double sl = sum_sq(g.lambda);
  const double sm = sum_sq(g.mu);
  if (sl == 0.0 || sm == 0.0) throw DegenerateError("all eigenvalues vanish: constant variable");
  const double scale = 1.0 / std::sqrt(sl * sm);
  g.omega.reserve(g.lambda.size() * g.mu.size());
  for (double l : g.lambda)
    for (double m : g.mu) g.omega.push_back(l * m * scale);
  return g;
}

EigenWeightGrid weight_grid_from_margins(std::span<const double> row, std::span<const double> col) {
  const auto lambda = marginal_eigvals(row);
  const auto mu = marginal_eigvals(col);
  return weight_grid(lambda, mu);
}

std::vector<double> sample_null(const EigenWeightGrid& grid, std::size_t draws, Seed seed) {
  const std::vector<double> w = grid.nonzero_weights();
  std::vector<double> out(draws, 0.0);
  const std::size_t blocks = (draws + kNullBlockSize - 1) / kNullBlockSize;
  const auto nblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    auto stream = RandomStream::derive(seed, {static_cast<std::uint64_t>(b)});
    const std::size_t begin = static_cast<std::size_t>(b) * kNullBlockSize;
    const std::size_t end = std::min(draws, begin + kNullBlockSize);
    for (std::size_t d = begin; d < end; ++d) {
      double s = 0.0;
      for (double wl : w) {
        const double z = stream.normal();
        s += wl * (z * z - 1.0);
      }
      out[d] = s;
    }
  }
  return out;
}

double pvalue_from_sample(double statistic, std::span<const double> null_sample) {
  const auto exceed = std::count_if(null_sample.begin(), null_sample.end(), [&](double s) { return s >= statistic; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(null_sample.size()) + 1.0);
}

double pvalue_weighted(double statistic, const EigenWeightGrid& grid, std::size_t draws, Seed seed) {
  if (draws < 1000) throw InputError("weighted chi-squared p-value needs at least 1000 draws");
  return pvalue_from_sample(statistic, sample_null(grid, draws, seed));
}

double pvalue_chi1(double statistic) {
  if (!(statistic >= -1.0)) return 1.0;
  return std::erfc(std::sqrt((statistic + 1.0) / 2.0));
}

}  // namespace catdcov
