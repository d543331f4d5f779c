#include "catch_amalgamated.hpp"
#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"
#include "catdcov/influence.hpp"
#include "catdcov/reference.hpp"
#include "oracles.hpp"

using namespace catdcov;

namespace {

double tolerance(double v) { return std::max(1e-4, 1e-3 * std::abs(v)); }

}  // namespace

TEST_CASE("IF of delta on the diagonal 2x2 pmf", "[influence]") {
  const auto p = JointPMF::from_rows({{0.5, 0.0}, {0.0, 0.5}});
  CHECK(if_delta(p, 1, 2) == Catch::Approx(-1.0).margin(1e-14));
  CHECK(if_delta(p, 1, 1) == Catch::Approx(0.0).margin(1e-14));
  const auto t = delta_influence_terms(p, 1, 2);
  CHECK(t.t1 == Catch::Approx(-0.5));
  CHECK(t.t4 == Catch::Approx(-0.5));
  CHECK(gateaux_fd(Functional::delta, p, 1, 2) == Catch::Approx(-1.0).margin(1e-4));
  CHECK(gross_error_sensitivity(Functional::delta, p).gamma == Catch::Approx(1.0));
}

TEST_CASE("IF of delta vanishes at independence", "[influence]") {
  const std::vector<double> a{0.1, 0.6, 0.3}, b{0.25, 0.25, 0.5};
  const auto p = product_pmf(a, b);
  const auto s = gross_error_sensitivity(Functional::delta, p);
  CHECK(s.gamma == Catch::Approx(0.0).margin(1e-15));
  CHECK(std::abs(gateaux_fd(Functional::delta, p, 2, 3)) <= 1e-5);
}

TEST_CASE("analytic IFs match the finite-difference Gateaux derivative", "[influence]") {
  RandomStream s(11);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t I = 2 + static_cast<std::size_t>(s.uniform01() * 6);
    const std::size_t J = 2 + static_cast<std::size_t>(s.uniform01() * 6);
    const auto p = oracle::random_pmf(s, I, J, 0.05);
    for (std::size_t x = 1; x <= I; ++x)
      for (std::size_t y = 1; y <= J; ++y) {
        const double d = if_delta(p, x, y);
        const double e = if_eta(p, x, y);
        CHECK(std::abs(d - gateaux_fd(Functional::delta, p, x, y)) <= tolerance(d));
        CHECK(std::abs(e - gateaux_fd(Functional::eta, p, x, y)) <= tolerance(e));
      }
  }
}

TEST_CASE("IF of eta on the uniform 2x2 pmf matches the oracle", "[influence]") {
  const auto p = JointPMF::from_rows({{0.25, 0.25}, {0.25, 0.25}});
  for (std::size_t x = 1; x <= 2; ++x)
    for (std::size_t y = 1; y <= 2; ++y) {
      const double e = if_eta(p, x, y);
      CHECK(std::abs(e - gateaux_fd(Functional::eta, p, x, y)) <= 1e-4 * std::max(1.0, std::abs(e)));
    }
}

TEST_CASE("influence functions integrate to zero", "[influence]") {
  RandomStream s(12);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = oracle::random_pmf(s, 5, 4, 0.01);
    double sd = 0.0, se = 0.0;
    for (std::size_t x = 1; x <= 5; ++x)
      for (std::size_t y = 1; y <= 4; ++y) {
        sd += p(x - 1, y - 1) * if_delta(p, x, y);
        se += p(x - 1, y - 1) * if_eta(p, x, y);
      }
    CHECK(std::abs(sd) <= 1e-10);
    CHECK(std::abs(se) <= 1e-9);
  }
}

TEST_CASE("eta term groups sum to the value", "[influence]") {
  RandomStream s(13);
  const auto p = oracle::random_pmf(s, 4, 3, 0.1);
  const auto t = eta_influence_terms(p, 2, 3);
  CHECK(t.value() == Catch::Approx(t.interior + t.row + t.column + t.cell));
  CHECK(t.value() == Catch::Approx(if_eta(p, 2, 3)));
}

TEST_CASE("IF of delta stays below 11 on random pmfs", "[influence]") {
  RandomStream s(14);
  double worst = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t I = 2 + static_cast<std::size_t>(s.uniform01() * 19);
    const std::size_t J = 2 + static_cast<std::size_t>(s.uniform01() * 19);
    // sparse-ish pmfs push mass into few cells, where |IF| is largest
    std::vector<double> w(I * J);
    double total = 0.0;
    for (auto& v : w) total += (v = std::pow(s.uniform01(), 8.0));
    for (auto& v : w) v /= total;
    double sum = 0.0;
    for (double v : w) sum += v;
    *std::max_element(w.begin(), w.end()) += 1.0 - sum;
    worst = std::max(worst, gross_error_sensitivity(Functional::delta, JointPMF(I, J, w)).gamma);
  }
  CHECK(worst < 11.0);
}

TEST_CASE("fixed-dimension beta family blows up IF of eta", "[influence]") {
  for (double beta : {1e-3, 1e-4}) {
    const auto p = counterexample_pmf({CounterexampleFamily::fixed_dim_beta, 4, 4, beta, 1, 1, 0.0});
    CHECK(p(0, 0) == beta);
    CHECK(p.row_margins()[0] == Catch::Approx(2 * beta));
    CHECK(p.col_margins()[0] == Catch::Approx(2 * beta));
    const double v = if_eta(p, 1, 1);
    CHECK(std::abs(v) >= 0.99 / (4 * beta));
    const double d = eta_influence_terms(p, 1, 1).cell;
    CHECK(d == Catch::Approx(1 / (4 * beta) - 8 * beta * beta + 6 * beta - 2).epsilon(1e-9));
    CHECK(gross_error_sensitivity(Functional::eta, p).gamma >= 0.99 / (4 * beta));
  }
  const double r = if_eta(counterexample_pmf({CounterexampleFamily::fixed_dim_beta, 4, 4, 1e-4, 1, 1, 0.0}), 1, 1) /
                   if_eta(counterexample_pmf({CounterexampleFamily::fixed_dim_beta, 4, 4, 1e-3, 1, 1, 0.0}), 1, 1);
  CHECK(r == Catch::Approx(10.0).epsilon(0.01));
}

TEST_CASE("diverging-dimension alpha family structure", "[influence]") {
  const auto p = counterexample_pmf({CounterexampleFamily::diverging_dim_alpha, 10, 10, 0.05, 1, 1, 0.0});
  for (std::size_t j = 1; j < 10; ++j) CHECK(p(0, j) == 0.0);
  for (std::size_t i = 1; i < 10; ++i) CHECK(p(i, 0) == 0.0);
  CHECK(p(0, 0) == 0.05);
  // IF at the isolated cell is zero and the column group stays bounded as I grows
  for (std::size_t I : {10, 20, 30, 40}) {
    const auto q = counterexample_pmf({CounterexampleFamily::diverging_dim_alpha, I, I, 0.05, 1, 1, 0.0});
    const auto t = eta_influence_terms(q, 1, 1);
    CHECK(t.value() == Catch::Approx(0.0).margin(1e-12));
    CHECK(std::abs(t.column) <= 2.0);
    CHECK(std::abs(if_eta(q, 1, 1) - gateaux_fd(Functional::eta, q, 1, 1)) <= 1e-4);
  }
}

TEST_CASE("counterexample parameters are validated", "[influence]") {
  CHECK_THROWS_AS(counterexample_pmf({CounterexampleFamily::fixed_dim_beta, 4, 4, 0.4, 1, 1, 0.0}), InputError);
  CHECK_THROWS_AS(counterexample_pmf({CounterexampleFamily::diverging_dim_alpha, 4, 4, 0.0, 1, 1, 0.0}), InputError);
  CHECK_THROWS_AS(counterexample_pmf({CounterexampleFamily::fixed_dim_beta, 4, 4, 0.01, 5, 1, 0.0}), InputError);
  CHECK_THROWS_AS(counterexample_pmf({CounterexampleFamily::fixed_dim_beta, 4, 4, 0.01, 1, 1, 0.5}), InputError);
}

TEST_CASE("IF of eta is singular on an empty margin", "[influence]") {
  const auto p = JointPMF::from_rows({{0.5, 0.5}, {0.0, 0.0}});
  CHECK_THROWS_AS(if_eta(p, 2, 1), SingularInfluenceError);
  const auto s = gross_error_sensitivity(Functional::eta, p);
  CHECK(std::isinf(s.at(1, 0)));
  CHECK(std::isinf(s.gamma));
  CHECK_NOTHROW(if_delta(p, 2, 1));
}

TEST_CASE("contaminate validates eps and keeps mass", "[influence]") {
  const auto p = JointPMF::from_rows({{0.2, 0.3}, {0.1, 0.4}});
  CHECK_THROWS_AS(contaminate(p, 1, 1, 0.0), InputError);
  CHECK_THROWS_AS(contaminate(p, 1, 1, 1.0), InputError);
  const auto q = contaminate(p, 2, 1, 0.1);
  CHECK(q(1, 0) == Catch::Approx(0.9 * 0.1 + 0.1));
  CHECK(gateaux_fd_error(Functional::delta, p, 1, 2) < 1e-5);
}

TEST_CASE("grid kernel equals per-cell evaluation", "[influence]") {
  RandomStream s(15);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = oracle::random_pmf(s, 7, 9, 0.0);
    for (Functional f : {Functional::delta, Functional::eta}) {
      const auto a = gross_error_sensitivity(f, p);
      const auto b = reference::gross_error_sensitivity(f, p);
      REQUIRE(a.values.size() == b.values.size());
      for (std::size_t k = 0; k < a.values.size(); ++k)
        CHECK(a.values[k] == Catch::Approx(b.values[k]).margin(1e-10));
      CHECK(a.gamma == Catch::Approx(b.gamma).margin(1e-10));
    }
  }
}

TEST_CASE("richardson step tightens the forward difference", "[influence]") {
  const auto p = JointPMF::from_rows({{0.05, 0.15, 0.1}, {0.2, 0.02, 0.08}, {0.1, 0.2, 0.1}});
  for (std::size_t x = 1; x <= 3; ++x) {
    for (std::size_t y = 1; y <= 3; ++y) {
      const double e = if_eta(p, x, y);
      const double forward = std::abs(e - gateaux_fd(Functional::eta, p, x, y));
      const double extrapolated = std::abs(e - gateaux_fd_richardson(Functional::eta, p, x, y));
      CHECK(extrapolated <= forward);
      CHECK(extrapolated <= 1e-6 * std::max(1.0, std::abs(e)));
    }
  }
}
