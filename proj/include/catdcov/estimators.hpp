#pragma once

// Dependence functionals and estimators for two categorical variables under
// the 0/1 distance: squared distance covariance (population, MLE plug-in and
// unbiased U-statistic), Pearson and likelihood-ratio chi-squared, the
// unbiased squared distance variance, and the bias-corrected distance
// correlation statistic.

#include <span>

#include "catdcov/table.hpp"

namespace catdcov {

/// Pairwise-distance sums behind the fourth-order U-statistic.
/// For two variables: T1 = sum_lm a_lm b_lm, T2 = sum_l (sum_m a_lm)(sum_m b_lm),
/// T3 = (sum_lm a_lm)(sum_lm b_lm). For one variable set b = a.
struct UStatComponents {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

/// sum_ij (pi_ij - pi_i+ pi_+j)^2.
double delta_pop(const JointPMF& pmf);

/// sum_ij (pi_ij - pi_i+ pi_+j)^2 / (pi_i+ pi_+j); cells with an empty margin contribute 0.
double eta_pop(const JointPMF& pmf);

/// Plug-in estimate delta_pop(mle_pmf(table)).
double delta_hat(const ContingencyTable& table);

struct PearsonChi2 {
  double eta_hat = 0.0;
  double scaled = 0.0;  ///< n * eta_hat
  int df = 0;           ///< (I' - 1)(J' - 1) over nonempty rows/columns
};

PearsonChi2 pearson_chi2(const ContingencyTable& table);

/// 2 sum pi_ij log(pi_ij / (pi_i+ pi_+j)), zero cells contribute 0.
double lrt_g(const ContingencyTable& table);

/// Count closed forms:
///   T1 = n^2 - sum n_i+^2 - sum n_+j^2 + sum n_ij^2
///   T2 = sum n_ij (n - n_i+)(n - n_+j)
///   T3 = (n^2 - sum n_i+^2)(n^2 - sum n_+j^2)
UStatComponents ustat_components_xy(const ContingencyTable& table);

/// Single-variable counterpart from category counts:
/// T1 = n^2 - sum n_i^2, T2 = sum n_i (n - n_i)^2, T3 = T1^2.
UStatComponents ustat_components_single(std::span<const Count> margin_counts);

/// T1/(n(n-3)) - 2 T2/(n(n-2)(n-3)) + T3/(n(n-1)(n-2)(n-3)).
double ustat_combine(const UStatComponents& t, Count n);

/// Unbiased squared distance covariance. Requires n >= 4; may be negative.
double delta_tilde(const ContingencyTable& table);

/// Unbiased squared distance variance of one variable from its category counts (n >= 4).
double omega_tilde(std::span<const Count> margin_counts);

/// n * delta_tilde / sqrt(omega_tilde(X) omega_tilde(Y)).
/// Throws DegenerateError when either variable is constant in the sample.
double bcdcor_stat(const ContingencyTable& table);

}  // namespace catdcov
