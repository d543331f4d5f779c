#include <map>

#include "catch_amalgamated.hpp"
#include "catdcov/errors.hpp"
#include "catdcov/random.hpp"
#include "catdcov/table.hpp"

using namespace catdcov;

TEST_CASE("table_from_sample cross-classifies 1-based labels", "[table]") {
  PairedSample s{{1, 1, 2, 3, 3, 3}, {1, 2, 2, 1, 1, 2}};
  const auto t = table_from_sample(s, 3, 2);
  CHECK(t.total() == 6);
  CHECK(t(0, 0) == 1);
  CHECK(t(0, 1) == 1);
  CHECK(t(1, 1) == 1);
  CHECK(t(2, 0) == 2);
  CHECK(std::vector<Count>(t.row_margins().begin(), t.row_margins().end()) == std::vector<Count>{2, 1, 3});
  CHECK(std::vector<Count>(t.col_margins().begin(), t.col_margins().end()) == std::vector<Count>{3, 3});
}

TEST_CASE("table_from_sample rejects labels outside the declared range", "[table]") {
  CHECK_THROWS_AS(table_from_sample(PairedSample{{1, 3}, {1, 1}}, 2, 2), InputError);
  CHECK_THROWS_AS(table_from_sample(PairedSample{{1, 0}, {1, 1}}, 2, 2), InputError);
  CHECK_THROWS_AS(table_from_sample(PairedSample{{1, 1}, {1}}, 2, 2), InputError);
}

TEST_CASE("from_rows and counts agree", "[table]") {
  const auto t = ContingencyTable::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.total() == 21);
  CHECK(t(1, 2) == 6);
  CHECK_THROWS_AS(ContingencyTable::from_rows({{1, 2}, {3}}), InputError);
  CHECK_THROWS_AS(ContingencyTable::from_rows({{1, -2}}), InputError);
}

TEST_CASE("JointPMF validates mass and entries", "[table]") {
  CHECK_NOTHROW(JointPMF(1, 2, {0.5, 0.5}));
  CHECK_THROWS_AS(JointPMF(1, 2, {0.5, 0.6}), InputError);
  CHECK_THROWS_AS(JointPMF(1, 2, {1.5, -0.5}), InputError);
  CHECK_THROWS_AS(JointPMF(1, 2, {0.5, 0.5 + 1e-10}), InputError);
  CHECK_NOTHROW(JointPMF(1, 2, {0.5, 0.5 + 1e-13}));
  const auto p = JointPMF::from_rows({{0.1, 0.2}, {0.3, 0.4}});
  CHECK(p.row_margins()[0] == Catch::Approx(0.3));
  CHECK(p.col_margins()[1] == Catch::Approx(0.6));
}

TEST_CASE("mle_pmf divides by n and rejects empty tables", "[table]") {
  const auto p = mle_pmf(ContingencyTable::from_rows({{1, 3}, {0, 4}}));
  CHECK(p(0, 1) == 3.0 / 8.0);
  CHECK(p(1, 0) == 0.0);
  CHECK_THROWS_AS(mle_pmf(ContingencyTable(2, 2)), InputError);
}

TEST_CASE("product_pmf multiplies margins", "[table]") {
  const std::vector<double> a{0.25, 0.75}, b{0.5, 0.3, 0.2};
  const auto p = product_pmf(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(p(i, j) == Catch::Approx(a[i] * b[j]));
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(product_pmf(bad, b), InputError);
}

TEST_CASE("sample_pmf is seeded and matches cell frequencies", "[table]") {
  const auto p = JointPMF::from_rows({{0.1, 0.0}, {0.3, 0.6}});
  RandomStream s1(9), s2(9);
  const auto a = sample_pmf(p, 50000, s1);
  const auto b = sample_pmf(p, 50000, s2);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  const auto t = table_from_sample(a, 2, 2);
  CHECK(t(0, 1) == 0);  // zero-probability cell never drawn
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double pij = p(i, j);
      const double se = std::sqrt(pij * (1 - pij) / 50000.0);
      CHECK(std::abs(static_cast<double>(t(i, j)) / 50000.0 - pij) <= 5 * se + 1e-12);
    }
}

TEST_CASE("derive_seed is a pure function of the path", "[table]") {
  static_assert(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  CHECK(derive_seed(1, {0}) != derive_seed(1, {0, 0}));
  RandomStream a = RandomStream::derive(5, {1}), b = RandomStream::derive(5, {1});
  for (int i = 0; i < 10; ++i) CHECK(a.uniform01() == b.uniform01());
}

TEST_CASE("uniform01 stays in [0, 1)", "[table]") {
  RandomStream s(1);
  double lo = 1, hi = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
}
