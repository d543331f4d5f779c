#include "catdcov/table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "catdcov/errors.hpp"

namespace catdcov {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), counts_(rows * cols, 0), row_margins_(rows, 0), col_margins_(cols, 0) {
  if (rows == 0 || cols == 0) throw InputError("contingency table needs at least one row and one column");
}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts)
    : ContingencyTable(rows, cols) {
  if (counts.size() != rows * cols) throw InputError("count vector does not match table dimensions");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Count v = counts[r * cols + c];
      if (v < 0) throw InputError("negative cell count");
      increment(r, c, v);
    }
  }
}

ContingencyTable ContingencyTable::from_rows(const std::vector<std::vector<Count>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InputError("empty count grid");
  const std::size_t cols = rows.front().size();
  std::vector<Count> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw InputError("ragged count grid");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ContingencyTable(rows.size(), cols, std::move(flat));
}

void ContingencyTable::increment(std::size_t r, std::size_t c, Count by) noexcept {
  counts_[r * cols_ + c] += by;
  row_margins_[r] += by;
  col_margins_[c] += by;
  total_ += by;
}

JointPMF::JointPMF(std::size_t rows, std::size_t cols, std::vector<double> probs)
    : rows_(rows), cols_(cols), probs_(std::move(probs)), row_margins_(rows, 0.0), col_margins_(cols, 0.0) {
  if (rows == 0 || cols == 0) throw InputError("pmf needs at least one row and one column");
  if (probs_.size() != rows * cols) throw InputError("probability vector does not match pmf dimensions");
  double mass = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = probs_[r * cols + c];
      if (!(p >= 0.0 && p <= 1.0)) throw InputError("pmf entry outside [0, 1]");
      row_margins_[r] += p;
      col_margins_[c] += p;
      mass += p;
    }
  }
  if (std::abs(mass - 1.0) > kMassTolerance) {
    throw InputError("pmf total mass " + std::to_string(mass) + " differs from 1");
  }
}

JointPMF JointPMF::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InputError("empty probability grid");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw InputError("ragged probability grid");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return JointPMF(rows.size(), cols, std::move(flat));
}

ContingencyTable table_from_sample(const PairedSample& sample, std::size_t rows, std::size_t cols) {
  if (sample.x.size() != sample.y.size()) throw InputError("x and y label vectors differ in length");
  ContingencyTable table(rows, cols);
  for (std::size_t l = 0; l < sample.x.size(); ++l) {
    const int xi = sample.x[l];
    const int yj = sample.y[l];
    if (xi < 1 || static_cast<std::size_t>(xi) > rows || yj < 1 || static_cast<std::size_t>(yj) > cols) {
      throw InputError("label out of range at observation " + std::to_string(l + 1));
    }
    table.increment(static_cast<std::size_t>(xi - 1), static_cast<std::size_t>(yj - 1));
  }
  return table;
}

JointPMF mle_pmf(const ContingencyTable& table) {
  if (table.total() == 0) throw InputError("empty contingency table");
  const double n = static_cast<double>(table.total());
  std::vector<double> probs(table.counts().size());
  std::transform(table.counts().begin(), table.counts().end(), probs.begin(),
                 [n](Count c) { return static_cast<double>(c) / n; });
  return JointPMF(table.rows(), table.cols(), std::move(probs));
}

JointPMF product_pmf(std::span<const double> row, std::span<const double> col) {
  auto check = [](std::span<const double> m, const char* which) {
    if (m.empty()) throw InputError(std::string(which) + " marginal is empty");
    double s = 0.0;
    for (double p : m) {
      if (!(p >= 0.0)) throw InputError(std::string(which) + " marginal has a negative entry");
      s += p;
    }
    if (std::abs(s - 1.0) > JointPMF::kMassTolerance) throw InputError(std::string(which) + " marginal does not sum to 1");
  };
  check(row, "row");
  check(col, "column");
  std::vector<double> probs;
  probs.reserve(row.size() * col.size());
  for (double a : row)
    for (double b : col) probs.push_back(a * b);
  return JointPMF(row.size(), col.size(), std::move(probs));
}

CellSampler::CellSampler(std::span<const double> probs) : cdf_(probs.size()) {
  std::partial_sum(probs.begin(), probs.end(), cdf_.begin());
}

std::size_t CellSampler::draw(RandomStream& stream) const {
  const double u = stream.uniform01() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) {
    // u rounded up onto the total mass; take the last cell with positive probability
    return static_cast<std::size_t>(std::lower_bound(cdf_.begin(), cdf_.end(), cdf_.back()) - cdf_.begin());
  }
  return static_cast<std::size_t>(it - cdf_.begin());
}

PairedSample sample_pmf(const JointPMF& pmf, std::size_t n, RandomStream& stream) {
  const CellSampler sampler(pmf.probs());
  PairedSample out;
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t cell = sampler.draw(stream);
    out.x[l] = static_cast<int>(cell / pmf.cols()) + 1;
    out.y[l] = static_cast<int>(cell % pmf.cols()) + 1;
  }
  return out;
}

}  // namespace catdcov
