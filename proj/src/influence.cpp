#include "catdcov/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"

namespace catdcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t to_row(const JointPMF& pmf, std::size_t x) {
  if (x < 1 || x > pmf.rows()) throw InputError("contamination row " + std::to_string(x) + " out of range");
  return x - 1;
}

std::size_t to_col(const JointPMF& pmf, std::size_t y) {
  if (y < 1 || y > pmf.cols()) throw InputError("contamination column " + std::to_string(y) + " out of range");
  return y - 1;
}

// Shared part of IF_delta that does not depend on the contamination point.
double delta_interior(const JointPMF& pmf) {
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.rows(); ++i) {
    for (std::size_t j = 0; j < pmf.cols(); ++j) {
      const double e = a[i] * b[j];
      s += (pmf(i, j) - e) * (2.0 * e - pmf(i, j));
    }
  }
  return 2.0 * s;
}

double delta_row_term(const JointPMF& pmf, std::size_t r) {
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();
  double s = 0.0;
  for (std::size_t j = 0; j < pmf.cols(); ++j) s += b[j] * (pmf(r, j) - a[r] * b[j]);
  return -2.0 * s;
}

double delta_col_term(const JointPMF& pmf, std::size_t c) {
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.rows(); ++i) s += a[i] * (pmf(i, c) - a[i] * b[c]);
  return -2.0 * s;
}

// sum_j pi_rj^2 / (a_r^2 b_j) over columns with positive mass.
double eta_row_curvature(const JointPMF& pmf, std::size_t r) {
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();
  double s = 0.0;
  for (std::size_t j = 0; j < pmf.cols(); ++j) {
    if (b[j] > 0.0) s += pmf(r, j) * pmf(r, j) / (a[r] * a[r] * b[j]);
  }
  return s;
}

double eta_col_curvature(const JointPMF& pmf, std::size_t c) {
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.rows(); ++i) {
    if (a[i] > 0.0) s += pmf(i, c) * pmf(i, c) / (a[i] * b[c] * b[c]);
  }
  return s;
}

}  // namespace

DeltaInfluenceTerms delta_influence_terms(const JointPMF& pmf, std::size_t x, std::size_t y) {
  const std::size_t r = to_row(pmf, x);
  const std::size_t c = to_col(pmf, y);
  DeltaInfluenceTerms t;
  t.t1 = delta_interior(pmf);
  t.t2 = delta_row_term(pmf, r);
  t.t3 = delta_col_term(pmf, c);
  t.t4 = 2.0 * (pmf(r, c) - pmf.row_margins()[r] * pmf.col_margins()[c]);
  return t;
}

double if_delta(const JointPMF& pmf, std::size_t x, std::size_t y) {
  return delta_influence_terms(pmf, x, y).value();
}

EtaInfluenceTerms eta_influence_terms(const JointPMF& pmf, std::size_t x, std::size_t y) {
  const std::size_t r = to_row(pmf, x);
  const std::size_t c = to_col(pmf, y);
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();
  if (a[r] <= 0.0 || b[c] <= 0.0) {
    throw SingularInfluenceError("eta influence undefined: zero margin at contamination point (" + std::to_string(x) +
                                 ", " + std::to_string(y) + ")");
  }
  EtaInfluenceTerms t;
  for (std::size_t i = 0; i < pmf.rows(); ++i) {
    if (i == r) continue;
    for (std::size_t j = 0; j < pmf.cols(); ++j) {
      if (j == c) continue;
      t.interior += 2.0 * (pmf(i, j) - a[i] * b[j]);
    }
  }
  for (std::size_t j = 0; j < pmf.cols(); ++j) {
    if (j == c || b[j] == 0.0) continue;
    const double p = pmf(r, j);
    t.row += -p * p / (a[r] * a[r] * b[j]) + 2.0 * p + b[j] - 2.0 * a[r] * b[j];
  }
  for (std::size_t i = 0; i < pmf.rows(); ++i) {
    if (i == r || a[i] == 0.0) continue;
    const double p = pmf(i, c);
    t.column += -p * p / (a[i] * b[c] * b[c]) + 2.0 * p + a[i] - 2.0 * a[i] * b[c];
  }
  const double p = pmf(r, c);
  const double ax = a[r];
  const double by = b[c];
  t.cell = 2.0 * p / (ax * by) - p * p / (ax * ax * by) - p * p / (ax * by * by) - 2.0 + 2.0 * p + ax + by -
           2.0 * ax * by;
  return t;
}

double if_eta(const JointPMF& pmf, std::size_t x, std::size_t y) { return eta_influence_terms(pmf, x, y).value(); }

double functional_value(Functional f, const JointPMF& pmf) {
  return f == Functional::delta ? delta_pop(pmf) : eta_pop(pmf);
}

JointPMF contaminate(const JointPMF& pmf, std::size_t x, std::size_t y, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("contamination eps must lie in (0, 1)");
  const std::size_t r = to_row(pmf, x);
  const std::size_t c = to_col(pmf, y);
  std::vector<double> probs(pmf.probs().begin(), pmf.probs().end());
  for (double& p : probs) p *= (1.0 - eps);
  probs[r * pmf.cols() + c] += eps;
  return JointPMF(pmf.rows(), pmf.cols(), std::move(probs));
}

double gateaux_fd(Functional f, const JointPMF& pmf, std::size_t x, std::size_t y, double eps) {
  return (functional_value(f, contaminate(pmf, x, y, eps)) - functional_value(f, pmf)) / eps;
}

double gateaux_fd_richardson(Functional f, const JointPMF& pmf, std::size_t x, std::size_t y, double eps) {
  return 2.0 * gateaux_fd(f, pmf, x, y, 0.5 * eps) - gateaux_fd(f, pmf, x, y, eps);
}

double gateaux_fd_error(Functional f, const JointPMF& pmf, std::size_t x, std::size_t y, double eps) {
  return std::abs(gateaux_fd(f, pmf, x, y, eps) - gateaux_fd(f, pmf, x, y, 0.5 * eps));
}

InfluenceSurface gross_error_sensitivity(Functional f, const JointPMF& pmf) {
  const std::size_t rows = pmf.rows();
  const std::size_t cols = pmf.cols();
  const auto a = pmf.row_margins();
  const auto b = pmf.col_margins();

  std::vector<double> row_part(rows);
  std::vector<double> col_part(cols);
  double shared = 0.0;
  if (f == Functional::delta) {
    shared = delta_interior(pmf);
    for (std::size_t i = 0; i < rows; ++i) row_part[i] = delta_row_term(pmf, i);
    for (std::size_t j = 0; j < cols; ++j) col_part[j] = delta_col_term(pmf, j);
  } else {
    for (std::size_t i = 0; i < rows; ++i) row_part[i] = a[i] > 0.0 ? eta_row_curvature(pmf, i) : 0.0;
    for (std::size_t j = 0; j < cols; ++j) col_part[j] = b[j] > 0.0 ? eta_col_curvature(pmf, j) : 0.0;
  }

  InfluenceSurface out{rows, cols, std::vector<double>(rows * cols), 0.0};
  const auto nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nrows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < cols; ++j) {
      double v;
      if (f == Functional::delta) {
        v = shared + row_part[i] + col_part[j] + 2.0 * (pmf(i, j) - a[i] * b[j]);
      } else if (a[i] <= 0.0 || b[j] <= 0.0) {
        v = kInf;
      } else {
        // closed form of the four groups: the linear pieces sum to zero
        v = 2.0 * pmf(i, j) / (a[i] * b[j]) - row_part[i] - col_part[j];
      }
      out.values[i * cols + j] = v;
    }
  }
  for (double v : out.values) out.gamma = std::max(out.gamma, std::abs(v));
  return out;
}

JointPMF counterexample_pmf(const CounterexampleParams& p) {
  if (p.rows < 2 || p.cols < 2) throw InputError("counterexample needs at least a 2 x 2 table");
  if (p.x < 1 || p.x > p.rows || p.y < 1 || p.y > p.cols) throw InputError("counterexample cell out of range");
  const std::size_t r = p.x - 1;
  const std::size_t c = p.y - 1;
  const double off_rows = static_cast<double>(p.rows - 1);
  const double off_cols = static_cast<double>(p.cols - 1);
  std::vector<double> probs(p.rows * p.cols, 0.0);
  double rest = 0.0;

  if (p.family == CounterexampleFamily::fixed_dim_beta) {
    const double beta = p.mass;
    if (!(beta > 0.0) || 3.0 * beta >= 1.0) throw InputError("fixed-dimension family needs 0 < beta < 1/3");
    probs[r * p.cols + c] = beta;
    for (std::size_t j = 0; j < p.cols; ++j)
      if (j != c) probs[r * p.cols + j] = beta / off_cols;
    for (std::size_t i = 0; i < p.rows; ++i)
      if (i != r) probs[i * p.cols + c] = beta / off_rows;
    rest = 1.0 - 3.0 * beta;
  } else {
    const double alpha = p.mass;
    if (!(alpha > 0.0) || alpha > 1.0) throw InputError("diverging-dimension family needs 0 < alpha <= 1");
    probs[r * p.cols + c] = alpha;
    rest = 1.0 - alpha;
  }

  const double fill = rest / (off_rows * off_cols);
  for (std::size_t i = 0; i < p.rows; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0; j < p.cols; ++j)
      if (j != c) probs[i * p.cols + j] = fill;
  }
  JointPMF pmf(p.rows, p.cols, std::move(probs));
  for (std::size_t i = 0; i < p.rows; ++i) {
    if (i != r && !(pmf.row_margins()[i] > p.margin_floor)) throw InputError("row margin does not exceed the floor c");
  }
  for (std::size_t j = 0; j < p.cols; ++j) {
    if (j != c && !(pmf.col_margins()[j] > p.margin_floor)) throw InputError("column margin does not exceed the floor c");
  }
  return pmf;
}

}  // namespace catdcov
