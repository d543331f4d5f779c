#pragma once

// Straightforward serial versions of the OpenMP kernels. Used by the test
// suite as oracles and by the benchmark as the baseline; not part of the CLI.

#include <cstddef>
#include <vector>

#include "catdcov/hyptest.hpp"
#include "catdcov/influence.hpp"
#include "catdcov/nulldist.hpp"
#include "catdcov/screening.hpp"

namespace catdcov::reference {

std::vector<double> feature_stats(const FeatureMatrix& data, Estimator estimator);

std::size_t permutation_exceedances(const PairedSample& sample, std::size_t rows, std::size_t cols,
                                    PermutationStatistic stat, double observed, std::size_t permutations, Seed seed);

std::vector<double> sample_null(const EigenWeightGrid& grid, std::size_t draws, Seed seed);

/// One if_delta / if_eta call per cell.
InfluenceSurface gross_error_sensitivity(Functional f, const JointPMF& pmf);

/// O(K^2) breakpoint search refitting both lines from scratch for each b.
ChangePoint changepoint_threshold(const std::vector<double>& stats);

}  // namespace catdcov::reference
