#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "catdcov/random.hpp"
#include "catdcov/table.hpp"

namespace catdcov {

enum class TestMethod { permutation, weighted_chisq, chisq_df1, pearson, lrt };

std::string_view to_string(TestMethod m);
/// Accepts the enum spellings plus the CLI aliases "weighted" and "chisq1".
TestMethod parse_test_method(std::string_view name);

enum class PermutationStatistic { delta_hat, delta_tilde };

inline constexpr std::size_t kDefaultPermutations = 999;
inline constexpr std::size_t kDefaultNullDraws = 100000;

struct TestOutcome {
  TestMethod method = TestMethod::pearson;
  double statistic = 0.0;
  double pvalue = 1.0;
  Count n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t replicates_or_draws = 0;
  std::optional<Seed> seed;
};

/// Single-line JSON with method, statistic, pvalue, n, I, J (+ replicates/draws and seed when set).
std::string to_json_line(const TestOutcome& outcome);

/// Permutes y labels with x fixed. Permutation b shuffles with the substream
/// derive_seed(seed, {b}); p = (1 + #{perm >= observed}) / (B + 1).
TestOutcome permutation_test(const PairedSample& sample, std::size_t rows, std::size_t cols,
                             PermutationStatistic stat, std::size_t permutations, Seed seed);

/// Number of permuted statistics >= observed. OpenMP-parallel over permutations.
std::size_t permutation_exceedances(const PairedSample& sample, std::size_t rows, std::size_t cols,
                                    PermutationStatistic stat, double observed, std::size_t permutations, Seed seed);

double permutation_statistic(const ContingencyTable& table, PermutationStatistic stat);

/// Bias-corrected statistic against the weighted chi-squared law with weights
/// from the sample margins.
TestOutcome weighted_chi2_test(const ContingencyTable& table, std::size_t draws, Seed seed);

/// Bias-corrected statistic against chi2_1 - 1.
TestOutcome chi1_test(const ContingencyTable& table);

/// n * eta_hat against chi2 with df from nonempty rows/columns. Throws InputError when df = 0.
TestOutcome pearson_test(const ContingencyTable& table);

/// n * g_hat against the same reference law.
TestOutcome lrt_test(const ContingencyTable& table);

/// Upper tail of chi-squared with df degrees of freedom.
double chi2_upper_tail(double x, double df);

}  // namespace catdcov
