#include "catdcov/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catdcov/errors.hpp"

namespace catdcov {

namespace {

double sum_squares(std::span<const Count> v) {
  double s = 0.0;
  for (Count c : v) s += static_cast<double>(c) * static_cast<double>(c);
  return s;
}

void require_nonempty(const ContingencyTable& table) {
  if (table.total() == 0) throw InputError("empty contingency table");
}

void require_ustat_size(Count n) {
  if (n < 4) throw InsufficientSampleError("U-statistic estimators need n >= 4");
}

}  // namespace

double delta_pop(const JointPMF& pmf) {
  const auto rows = pmf.row_margins();
  const auto cols = pmf.col_margins();
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.rows(); ++i) {
    for (std::size_t j = 0; j < pmf.cols(); ++j) {
      const double r = pmf(i, j) - rows[i] * cols[j];
      s += r * r;
    }
  }
  return s;
}

double eta_pop(const JointPMF& pmf) {
  const auto rows = pmf.row_margins();
  const auto cols = pmf.col_margins();
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.rows(); ++i) {
    for (std::size_t j = 0; j < pmf.cols(); ++j) {
      const double e = rows[i] * cols[j];
      if (e == 0.0) {
        if (pmf(i, j) > 0.0) throw InputError("positive cell with zero margin product");
        continue;
      }
      const double r = pmf(i, j) - e;
      s += r * r / e;
    }
  }
  return s;
}

double delta_hat(const ContingencyTable& table) {
  require_nonempty(table);
  return delta_pop(mle_pmf(table));
}

PearsonChi2 pearson_chi2(const ContingencyTable& table) {
  require_nonempty(table);
  const JointPMF p = mle_pmf(table);
  PearsonChi2 out;
  out.eta_hat = eta_pop(p);
  out.scaled = static_cast<double>(table.total()) * out.eta_hat;
  const auto nonempty = [](std::span<const Count> m) {
    return static_cast<int>(std::count_if(m.begin(), m.end(), [](Count c) { return c > 0; }));
  };
  out.df = (nonempty(table.row_margins()) - 1) * (nonempty(table.col_margins()) - 1);
  return out;
}

double lrt_g(const ContingencyTable& table) {
  require_nonempty(table);
  const double n = static_cast<double>(table.total());
  double s = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const Count c = table(i, j);
      if (c == 0) continue;
      // pi_ij / (pi_i+ pi_+j) = n n_ij / (n_i+ n_+j)
      const double ratio = n * static_cast<double>(c) /
                           (static_cast<double>(table.row_margins()[i]) * static_cast<double>(table.col_margins()[j]));
      s += static_cast<double>(c) / n * std::log(ratio);
    }
  }
  return 2.0 * s;
}

UStatComponents ustat_components_xy(const ContingencyTable& table) {
  const double n = static_cast<double>(table.total());
  const double n2 = n * n;
  const double srow = sum_squares(table.row_margins());
  const double scol = sum_squares(table.col_margins());
  UStatComponents t;
  t.t1 = n2 - srow - scol + sum_squares(table.counts());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const double ri = n - static_cast<double>(table.row_margins()[i]);
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const Count c = table(i, j);
      if (c == 0) continue;
      t.t2 += static_cast<double>(c) * ri * (n - static_cast<double>(table.col_margins()[j]));
    }
  }
  t.t3 = (n2 - srow) * (n2 - scol);
  return t;
}

UStatComponents ustat_components_single(std::span<const Count> margin_counts) {
  const double n = static_cast<double>(std::accumulate(margin_counts.begin(), margin_counts.end(), Count{0}));
  UStatComponents t;
  t.t1 = n * n - sum_squares(margin_counts);
  for (Count c : margin_counts) {
    const double rest = n - static_cast<double>(c);
    t.t2 += static_cast<double>(c) * rest * rest;
  }
  t.t3 = t.t1 * t.t1;
  return t;
}

double ustat_combine(const UStatComponents& t, Count n) {
  require_ustat_size(n);
  const double m = static_cast<double>(n);
  return t.t1 / (m * (m - 3.0)) - 2.0 * t.t2 / (m * (m - 2.0) * (m - 3.0)) +
         t.t3 / (m * (m - 1.0) * (m - 2.0) * (m - 3.0));
}

double delta_tilde(const ContingencyTable& table) {
  require_ustat_size(table.total());
  return ustat_combine(ustat_components_xy(table), table.total());
}

double omega_tilde(std::span<const Count> margin_counts) {
  const Count n = std::accumulate(margin_counts.begin(), margin_counts.end(), Count{0});
  require_ustat_size(n);
  return ustat_combine(ustat_components_single(margin_counts), n);
}

double bcdcor_stat(const ContingencyTable& table) {
  require_ustat_size(table.total());
  const auto constant = [&](std::span<const Count> m) {
    return std::any_of(m.begin(), m.end(), [&](Count c) { return c == table.total(); });
  };
  if (constant(table.row_margins()) || constant(table.col_margins())) {
    throw DegenerateError("bias-corrected statistic undefined: a variable is constant in the sample");
  }
  const double ox = omega_tilde(table.row_margins());
  const double oy = omega_tilde(table.col_margins());
  if (!(ox > 0.0 && oy > 0.0)) throw DegenerateError("non-positive distance variance estimate");
  return static_cast<double>(table.total()) * delta_tilde(table) / std::sqrt(ox * oy);
}

}  // namespace catdcov
