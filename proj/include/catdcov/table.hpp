#pragma once

// Contingency tables, joint probability mass functions and paired categorical
// samples. Category labels are 1-based (1..I, 1..J); the cell accessors on
// ContingencyTable and JointPMF take 0-based storage indices.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "catdcov/random.hpp"

namespace catdcov {

using Count = std::int64_t;

class ContingencyTable {
 public:
  /// All-zero I x J table.
  ContingencyTable(std::size_t rows, std::size_t cols);
  /// Row-major counts; throws InputError on negative counts or size mismatch.
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts);
  static ContingencyTable from_rows(const std::vector<std::vector<Count>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Count total() const noexcept { return total_; }

  Count operator()(std::size_t r, std::size_t c) const noexcept { return counts_[r * cols_ + c]; }
  void increment(std::size_t r, std::size_t c, Count by = 1) noexcept;

  std::span<const Count> counts() const noexcept { return counts_; }
  std::span<const Count> row_margins() const noexcept { return row_margins_; }
  std::span<const Count> col_margins() const noexcept { return col_margins_; }

  bool operator==(const ContingencyTable&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> counts_;
  std::vector<Count> row_margins_;
  std::vector<Count> col_margins_;
  Count total_ = 0;
};

class JointPMF {
 public:
  /// Absolute tolerance on the total-mass check.
  static constexpr double kMassTolerance = 1e-12;

  /// Row-major probabilities; throws InputError unless entries are in [0,1]
  /// and sum to 1 within kMassTolerance.
  JointPMF(std::size_t rows, std::size_t cols, std::vector<double> probs);
  static JointPMF from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return probs_[r * cols_ + c]; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> row_margins() const noexcept { return row_margins_; }
  std::span<const double> col_margins() const noexcept { return col_margins_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> probs_;
  std::vector<double> row_margins_;
  std::vector<double> col_margins_;
};

/// n observations of (X, Y) with 1-based labels.
struct PairedSample {
  std::vector<int> x;
  std::vector<int> y;

  std::size_t size() const noexcept { return x.size(); }
};

/// Cross-classifies a sample into an I x J table. Labels must lie in 1..I and 1..J.
ContingencyTable table_from_sample(const PairedSample& sample, std::size_t rows, std::size_t cols);

/// Maximum likelihood estimate n_ij / n. Throws InputError on an empty table.
JointPMF mle_pmf(const ContingencyTable& table);

/// Independence model row_i * col_j. Each marginal must sum to 1 within 1e-12.
JointPMF product_pmf(std::span<const double> row, std::span<const double> col);

/// n i.i.d. draws from the IJ-cell categorical distribution by inverse CDF.
PairedSample sample_pmf(const JointPMF& pmf, std::size_t n, RandomStream& stream);

/// Cell-index sampler over a flattened pmf: prefix sums built once, O(log IJ) per draw.
class CellSampler {
 public:
  explicit CellSampler(std::span<const double> probs);
  std::size_t draw(RandomStream& stream) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace catdcov
