#pragma once

// Limiting null law of the bias-corrected distance correlation statistic for
// categorical data: sum_lm omega_lm (Z_lm^2 - 1) with omega_lm built from the
// eigenvalues of each margin's centred 0/1 distance operator.

#include <cstddef>
#include <span>
#include <vector>

#include "catdcov/random.hpp"

namespace catdcov {

/// Eigenvalues of pi pi^T - diag(pi), sorted ascending. All are <= 0 and
/// exactly I - 1 are nonzero for a strictly positive margin. Values within
/// 1e-12 of zero are clamped to 0.
std::vector<double> marginal_eigvals(std::span<const double> margin);

/// Closed forms for I = 2 and I = 3 (ascending; padded with the zero eigenvalue).
std::vector<double> marginal_eigvals_closed_form(std::span<const double> margin);

struct EigenWeightGrid {
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<double> omega;  ///< row-major lambda.size() x mu.size()

  double at(std::size_t l, std::size_t m) const { return omega[l * mu.size() + m]; }
  /// (sum lambda)(sum mu) / sqrt(sum lambda^2 sum mu^2). Equals 1 only in special cases.
  double weight_sum() const;
  /// Entries with |omega| above round-off.
  std::vector<double> nonzero_weights() const;
};

/// omega_lm = lambda_l mu_m / sqrt(sum lambda^2 sum mu^2).
/// Throws DegenerateError when either eigenvalue vector is identically zero.
EigenWeightGrid weight_grid(std::span<const double> lambda, std::span<const double> mu);

/// Weight grid from two marginal distributions.
EigenWeightGrid weight_grid_from_margins(std::span<const double> row, std::span<const double> col);

/// Draws per independently seeded block in sample_null.
inline constexpr std::size_t kNullBlockSize = 4096;

/// `draws` realizations of sum omega (Z^2 - 1). Block k of kNullBlockSize draws
/// uses the substream derive_seed(seed, {k}), so the output is independent of
/// the OpenMP thread count.
std::vector<double> sample_null(const EigenWeightGrid& grid, std::size_t draws, Seed seed);

/// Add-one Monte-Carlo tail (1 + #{S >= T}) / (draws + 1). Requires draws >= 1000.
double pvalue_weighted(double statistic, const EigenWeightGrid& grid, std::size_t draws, Seed seed);

/// Same estimator on an already drawn null sample.
double pvalue_from_sample(double statistic, std::span<const double> null_sample);

/// P(chi2_1 > T + 1) = 2 (1 - Phi(sqrt(T + 1))) for T >= -1, else 1.
double pvalue_chi1(double statistic);

}  // namespace catdcov
