// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "catdcov/reference.hpp"
#include "catdcov/simlab.hpp"

namespace {

using namespace catdcov;

FeatureMatrix make_features(std::size_t n, std::size_t K) {
  auto stream = RandomStream::derive(42, {0});
  std::vector<int> response(n);
  for (auto& y : response) y = 1 + static_cast<int>(stream.uniform01() * 8);
  std::vector<std::vector<int>> features(K, std::vector<int>(n));
  for (auto& f : features)
    for (auto& x : f) x = 1 + static_cast<int>(stream.uniform01() * 8);
  return FeatureMatrix(std::move(response), std::move(features));
}

PairedSample make_sample(std::size_t n) {
  auto stream = RandomStream::derive(42, {1});
  PairedSample s;
  for (std::size_t m = 0; m < n; ++m) {
    s.x.push_back(1 + static_cast<int>(stream.uniform01() * 8));
    s.y.push_back(1 + static_cast<int>(stream.uniform01() * 8));
  }
  return s;
}

JointPMF make_pmf(std::size_t dim) {
  auto stream = RandomStream::derive(42, {2});
  std::vector<double> p(dim * dim);
  double total = 0.0;
  for (auto& v : p) total += (v = 0.1 + stream.uniform01());
  for (auto& v : p) v /= total;
  return JointPMF(dim, dim, std::move(p));
}

void BM_FeatureStats(benchmark::State& st) {
  const auto data = make_features(100, 2000);
  for (auto _ : st) benchmark::DoNotOptimize(feature_stats(data, Estimator::delta_hat));
}
void BM_FeatureStatsSerial(benchmark::State& st) {
  const auto data = make_features(100, 2000);
  for (auto _ : st) benchmark::DoNotOptimize(reference::feature_stats(data, Estimator::delta_hat));
}

void BM_Permutation(benchmark::State& st) {
  const auto s = make_sample(64);
  for (auto _ : st)
    benchmark::DoNotOptimize(permutation_exceedances(s, 8, 8, PermutationStatistic::delta_tilde, 0.0, 999, 1));
}
void BM_PermutationSerial(benchmark::State& st) {
  const auto s = make_sample(64);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        reference::permutation_exceedances(s, 8, 8, PermutationStatistic::delta_tilde, 0.0, 999, 1));
}

void BM_NullDraws(benchmark::State& st) {
  const std::vector<double> u(8, 0.125);
  const auto grid = weight_grid_from_margins(u, u);
  for (auto _ : st) benchmark::DoNotOptimize(sample_null(grid, 100000, 3));
}
void BM_NullDrawsSerial(benchmark::State& st) {
  const std::vector<double> u(8, 0.125);
  const auto grid = weight_grid_from_margins(u, u);
  for (auto _ : st) benchmark::DoNotOptimize(reference::sample_null(grid, 100000, 3));
}

void BM_InfluenceGrid(benchmark::State& st) {
  const auto pmf = make_pmf(50);
  for (auto _ : st) benchmark::DoNotOptimize(gross_error_sensitivity(Functional::delta, pmf));
}
void BM_InfluenceGridSerial(benchmark::State& st) {
  const auto pmf = make_pmf(50);
  for (auto _ : st) benchmark::DoNotOptimize(reference::gross_error_sensitivity(Functional::delta, pmf));
}

void BM_Changepoint(benchmark::State& st) {
  const auto data = make_features(100, 2000);
  const auto stats = feature_stats(data, Estimator::delta_hat).values;
  for (auto _ : st) benchmark::DoNotOptimize(changepoint_threshold(stats));
}
void BM_ChangepointNaive(benchmark::State& st) {
  const auto data = make_features(100, 2000);
  const auto stats = feature_stats(data, Estimator::delta_hat).values;
  for (auto _ : st) benchmark::DoNotOptimize(reference::changepoint_threshold(stats));
}

}  // namespace

BENCHMARK(BM_FeatureStats);
BENCHMARK(BM_FeatureStatsSerial);
BENCHMARK(BM_Permutation);
BENCHMARK(BM_PermutationSerial);
BENCHMARK(BM_NullDraws);
BENCHMARK(BM_NullDrawsSerial);
BENCHMARK(BM_InfluenceGrid);
BENCHMARK(BM_InfluenceGridSerial);
BENCHMARK(BM_Changepoint);
BENCHMARK(BM_ChangepointNaive);

BENCHMARK_MAIN();
