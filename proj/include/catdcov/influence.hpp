#pragma once

// Influence functions of the population functionals delta (squared distance
// covariance) and eta (Pearson chi-squared) under point-mass contamination
// at a category pair (x, y), plus gross-error sensitivity and the
// constructive pmf families used to probe B-robustness.
//
// Contamination points x, y are 1-based category labels.

#include <cstddef>
#include <vector>

#include "catdcov/table.hpp"

namespace catdcov {

enum class Functional { delta, eta };

/// The four additive pieces of IF_delta:
///   t1 = 2 sum_ij r_ij (2 pi_i+ pi_+j - pi_ij)
///   t2 = -2 sum_j pi_+j r_xj,  t3 = -2 sum_i pi_i+ r_iy,  t4 = 2 r_xy
/// where r_ij = pi_ij - pi_i+ pi_+j.
struct DeltaInfluenceTerms {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  double value() const noexcept { return t1 + t2 + t3 + t4; }
};

/// IF_eta split by cell group (a = row margin, b = column margin):
///   interior  sum_{i!=x, j!=y} 2 (pi_ij - a_i b_j)
///   row       sum_{j!=y} -pi_xj^2/(a_x^2 b_j) + 2 pi_xj + b_j - 2 a_x b_j
///   column    sum_{i!=x} -pi_iy^2/(a_i b_y^2) + 2 pi_iy + a_i - 2 a_i b_y
///   cell      2 pi_xy/(a_x b_y) - pi_xy^2/(a_x^2 b_y) - pi_xy^2/(a_x b_y^2)
///             - 2 + 2 pi_xy + a_x + b_y - 2 a_x b_y
/// Cells whose margin product stays zero under contamination contribute 0.
struct EtaInfluenceTerms {
  double interior = 0.0;
  double row = 0.0;
  double column = 0.0;
  double cell = 0.0;
  double value() const noexcept { return interior + row + column + cell; }
};

DeltaInfluenceTerms delta_influence_terms(const JointPMF& pmf, std::size_t x, std::size_t y);
double if_delta(const JointPMF& pmf, std::size_t x, std::size_t y);

/// Throws SingularInfluenceError when pi_x+ or pi_+y is zero.
EtaInfluenceTerms eta_influence_terms(const JointPMF& pmf, std::size_t x, std::size_t y);
double if_eta(const JointPMF& pmf, std::size_t x, std::size_t y);

double functional_value(Functional f, const JointPMF& pmf);

/// (1 - eps) pi + eps delta_(x,y).
JointPMF contaminate(const JointPMF& pmf, std::size_t x, std::size_t y, double eps);

/// Forward-difference Gateaux derivative [R(contaminate(pi, eps)) - R(pi)] / eps.
double gateaux_fd(Functional f, const JointPMF& pmf, std::size_t x, std::size_t y, double eps = 1e-6);

/// One Richardson halving step: 2 fd(eps/2) - fd(eps), cancelling the O(eps) term.
double gateaux_fd_richardson(Functional f, const JointPMF& pmf, std::size_t x, std::size_t y, double eps = 1e-6);

/// |fd(eps) - fd(eps/2)|: one halving step as a convergence estimate.
double gateaux_fd_error(Functional f, const JointPMF& pmf, std::size_t x, std::size_t y, double eps = 1e-6);

struct InfluenceSurface {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  ///< row-major; +inf marks a singular contamination point
  double gamma = 0.0;          ///< max |values|

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Full IF grid and its sup-norm. OpenMP-parallel over rows.
InfluenceSurface gross_error_sensitivity(Functional f, const JointPMF& pmf);

enum class CounterexampleFamily {
  fixed_dim_beta,      ///< pi_xy = beta, pi_x+ = pi_+y = 2 beta
  diverging_dim_alpha  ///< pi_xy = pi_x+ = pi_+y = alpha
};

struct CounterexampleParams {
  CounterexampleFamily family = CounterexampleFamily::fixed_dim_beta;
  std::size_t rows = 2;
  std::size_t cols = 2;
  double mass = 0.0;        ///< beta or alpha
  std::size_t x = 1;
  std::size_t y = 1;
  double margin_floor = 0.0;  ///< c: margins outside row x / column y must exceed it
};

/// Fills row x / column y per the family and spreads the remaining mass
/// uniformly over the (I-1) x (J-1) complement block.
JointPMF counterexample_pmf(const CounterexampleParams& params);

}  // namespace catdcov
