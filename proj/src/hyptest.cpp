#include "catdcov/hyptest.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include "json.hpp"
#include <vector>

#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"
#include "catdcov/nulldist.hpp"

namespace catdcov {

std::string_view to_string(TestMethod m) {
  switch (m) {
    case TestMethod::permutation: return "permutation";
    case TestMethod::weighted_chisq: return "weighted_chisq";
    case TestMethod::chisq_df1: return "chisq_df1";
    case TestMethod::pearson: return "pearson";
    case TestMethod::lrt: return "lrt";
  }
  return "unknown";
}

TestMethod parse_test_method(std::string_view name) {
  if (name == "permutation") return TestMethod::permutation;
  if (name == "weighted" || name == "weighted_chisq") return TestMethod::weighted_chisq;
  if (name == "chisq1" || name == "chisq_df1") return TestMethod::chisq_df1;
  if (name == "pearson") return TestMethod::pearson;
  if (name == "lrt") return TestMethod::lrt;
  throw InputError("unknown test method '" + std::string(name) + "'");
}

std::string to_json_line(const TestOutcome& o) {
  nlohmann::ordered_json j;
  j["method"] = to_string(o.method);
  j["statistic"] = o.statistic;
  j["pvalue"] = o.pvalue;
  j["n"] = o.n;
  j["I"] = o.rows;
  j["J"] = o.cols;
  if (o.replicates_or_draws > 0) j["replicates_or_draws"] = o.replicates_or_draws;
  if (o.seed) j["seed"] = *o.seed;
  return j.dump();
}

double permutation_statistic(const ContingencyTable& table, PermutationStatistic stat) {
  return stat == PermutationStatistic::delta_hat ? delta_hat(table) : delta_tilde(table);
}

std::size_t permutation_exceedances(const PairedSample& sample, std::size_t rows, std::size_t cols,
                                    PermutationStatistic stat, double observed, std::size_t permutations, Seed seed) {
  // validates labels and sample size before entering the parallel region
  permutation_statistic(table_from_sample(sample, rows, cols), stat);
  std::vector<unsigned char> hit(permutations, 0);
  const auto total = static_cast<std::ptrdiff_t>(permutations);
#pragma omp parallel
  {
    PairedSample shuffled = sample;
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < total; ++b) {
      // each permutation starts from the original order so results do not
      // depend on which thread ran the previous one
      std::copy(sample.y.begin(), sample.y.end(), shuffled.y.begin());
      auto stream = RandomStream::derive(seed, {static_cast<std::uint64_t>(b)});
      std::shuffle(shuffled.y.begin(), shuffled.y.end(), stream.engine());
      hit[static_cast<std::size_t>(b)] =
          permutation_statistic(table_from_sample(shuffled, rows, cols), stat) >= observed ? 1 : 0;
    }
  }
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

TestOutcome permutation_test(const PairedSample& sample, std::size_t rows, std::size_t cols,
                             PermutationStatistic stat, std::size_t permutations, Seed seed) {
  if (permutations < 1) throw InputError("permutation test needs B >= 1");
  const ContingencyTable table = table_from_sample(sample, rows, cols);
  if (table.total() == 0) throw InputError("empty sample");
  TestOutcome o;
  o.method = TestMethod::permutation;
  o.statistic = permutation_statistic(table, stat);
  const std::size_t exceed = permutation_exceedances(sample, rows, cols, stat, o.statistic, permutations, seed);
  o.pvalue = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(permutations) + 1.0);
  o.n = table.total();
  o.rows = rows;
  o.cols = cols;
  o.replicates_or_draws = permutations;
  o.seed = seed;
  return o;
}

namespace {

std::vector<double> margin_probs(std::span<const Count> m, Count n) {
  std::vector<double> p(m.size());
  std::transform(m.begin(), m.end(), p.begin(), [n](Count c) { return static_cast<double>(c) / static_cast<double>(n); });
  return p;
}

TestOutcome base_outcome(const ContingencyTable& table, TestMethod method) {
  TestOutcome o;
  o.method = method;
  o.n = table.total();
  o.rows = table.rows();
  o.cols = table.cols();
  return o;
}

TestOutcome chi2_family_test(const ContingencyTable& table, TestMethod method) {
  const PearsonChi2 pc = pearson_chi2(table);
  if (pc.df <= 0) throw InputError("chi-squared test undefined: table has a single nonempty row or column");
  TestOutcome o = base_outcome(table, method);
  o.statistic = method == TestMethod::pearson ? pc.scaled : static_cast<double>(table.total()) * lrt_g(table);
  o.pvalue = chi2_upper_tail(o.statistic, pc.df);
  return o;
}

}  // namespace

TestOutcome weighted_chi2_test(const ContingencyTable& table, std::size_t draws, Seed seed) {
  TestOutcome o = base_outcome(table, TestMethod::weighted_chisq);
  o.statistic = bcdcor_stat(table);
  const auto grid = weight_grid_from_margins(margin_probs(table.row_margins(), table.total()),
                                             margin_probs(table.col_margins(), table.total()));
  o.pvalue = pvalue_weighted(o.statistic, grid, draws, seed);
  o.replicates_or_draws = draws;
  o.seed = seed;
  return o;
}

TestOutcome chi1_test(const ContingencyTable& table) {
  TestOutcome o = base_outcome(table, TestMethod::chisq_df1);
  o.statistic = bcdcor_stat(table);
  o.pvalue = pvalue_chi1(o.statistic);
  return o;
}

TestOutcome pearson_test(const ContingencyTable& table) { return chi2_family_test(table, TestMethod::pearson); }

TestOutcome lrt_test(const ContingencyTable& table) { return chi2_family_test(table, TestMethod::lrt); }

double chi2_upper_tail(double x, double df) {
  if (!(x > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace catdcov
