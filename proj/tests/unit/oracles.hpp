#pragma once

// Independent reference computations used only by the tests: literal
// pairwise sums over observations, U-/double-centred distance matrices and
// multinomial enumeration.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "catdcov/random.hpp"
#include "catdcov/table.hpp"

namespace oracle {

using catdcov::PairedSample;

inline std::vector<std::vector<double>> dist01(const std::vector<int>& v) {
  const std::size_t n = v.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) d[l][m] = v[l] != v[m] ? 1.0 : 0.0;
  return d;
}

struct Ts {
  double t1 = 0, t2 = 0, t3 = 0;
};

inline Ts pairwise_ts(const std::vector<int>& x, const std::vector<int>& y) {
  const auto a = dist01(x), b = dist01(y);
  const std::size_t n = x.size();
  Ts t;
  double sa = 0, sb = 0;
  for (std::size_t l = 0; l < n; ++l) {
    double ra = 0, rb = 0;
    for (std::size_t m = 0; m < n; ++m) {
      t.t1 += a[l][m] * b[l][m];
      ra += a[l][m];
      rb += b[l][m];
    }
    t.t2 += ra * rb;
    sa += ra;
    sb += rb;
  }
  t.t3 = sa * sb;
  return t;
}

// U-centred inner product (1/(n(n-3))) sum_{l != m} A~_lm B~_lm.
inline double ucentred_dcov(const std::vector<int>& x, const std::vector<int>& y) {
  const std::size_t n = x.size();
  auto centre = [n](std::vector<std::vector<double>> d) {
    std::vector<double> row(n, 0.0);
    double all = 0.0;
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m) {
        row[l] += d[l][m];
        all += d[l][m];
      }
    const double nn = static_cast<double>(n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m)
        d[l][m] = l == m ? 0.0 : d[l][m] - row[l] / (nn - 2) - row[m] / (nn - 2) + all / ((nn - 1) * (nn - 2));
    return d;
  };
  const auto A = centre(dist01(x)), B = centre(dist01(y));
  double s = 0.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      if (l != m) s += A[l][m] * B[l][m];
  const double nn = static_cast<double>(n);
  return s / (nn * (nn - 3));
}

// Double-centred V-statistic (1/n^2) sum A_lm B_lm.
inline double vstat_dcov(const std::vector<int>& x, const std::vector<int>& y) {
  const std::size_t n = x.size();
  auto centre = [n](std::vector<std::vector<double>> d) {
    std::vector<double> row(n, 0.0);
    double all = 0.0;
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m) {
        row[l] += d[l][m];
        all += d[l][m];
      }
    const double nn = static_cast<double>(n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m) d[l][m] = d[l][m] - row[l] / nn - row[m] / nn + all / (nn * nn);
    return d;
  };
  const auto A = centre(dist01(x)), B = centre(dist01(y));
  double s = 0.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) s += A[l][m] * B[l][m];
  return s / static_cast<double>(n * n);
}

inline PairedSample random_sample(catdcov::RandomStream& s, std::size_t n, std::size_t I, std::size_t J) {
  PairedSample p;
  for (std::size_t m = 0; m < n; ++m) {
    p.x.push_back(1 + static_cast<int>(s.uniform01() * static_cast<double>(I)));
    p.y.push_back(1 + static_cast<int>(s.uniform01() * static_cast<double>(J)));
  }
  return p;
}

inline catdcov::JointPMF random_pmf(catdcov::RandomStream& s, std::size_t I, std::size_t J, double floor = 0.0) {
  std::vector<double> p(I * J);
  double total = 0.0;
  for (auto& v : p) total += (v = floor + s.uniform01());
  for (auto& v : p) v /= total;
  // push rounding residue into the largest cell so the mass check is tight
  double sum = 0.0;
  for (double v : p) sum += v;
  *std::max_element(p.begin(), p.end()) += 1.0 - sum;
  return catdcov::JointPMF(I, J, std::move(p));
}

// Calls visit(counts, probability) for every table of n observations over
// the given cell probabilities.
inline void enumerate_multinomial(const std::vector<double>& p, int n,
                                  const std::function<void(const std::vector<catdcov::Count>&, double)>& visit) {
  std::vector<catdcov::Count> c(p.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t cell, int left) {
    if (cell + 1 == p.size()) {
      c[cell] = left;
      double logp = std::lgamma(n + 1.0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        logp -= std::lgamma(static_cast<double>(c[k]) + 1.0);
        if (c[k] > 0) logp += static_cast<double>(c[k]) * std::log(p[k]);
      }
      visit(c, std::exp(logp));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      c[cell] = k;
      rec(cell + 1, left - k);
    }
  };
  rec(0, n);
}

}  // namespace oracle
