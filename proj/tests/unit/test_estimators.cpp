#include "catch_amalgamated.hpp"
#include "catdcov/errors.hpp"
#include "catdcov/estimators.hpp"
#include "oracles.hpp"

using namespace catdcov;

TEST_CASE("T components equal literal pairwise sums", "[estimators]") {
  RandomStream s(101);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(s.uniform01() * 14);
    const std::size_t I = 1 + static_cast<std::size_t>(s.uniform01() * 4);
    const std::size_t J = 1 + static_cast<std::size_t>(s.uniform01() * 4);
    const auto sample = oracle::random_sample(s, n, I, J);
    const auto t = ustat_components_xy(table_from_sample(sample, I, J));
    const auto o = oracle::pairwise_ts(sample.x, sample.y);
    CHECK(t.t1 == o.t1);
    CHECK(t.t2 == o.t2);
    CHECK(t.t3 == o.t3);
  }
}

TEST_CASE("delta_tilde and omega_tilde match the U-centred oracle", "[estimators]") {
  RandomStream s(202);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 4 + static_cast<std::size_t>(s.uniform01() * 12);
    const auto sample = oracle::random_sample(s, n, 3, 4);
    const auto table = table_from_sample(sample, 3, 4);
    CHECK(delta_tilde(table) == Catch::Approx(oracle::ucentred_dcov(sample.x, sample.y)).margin(1e-12));
    CHECK(omega_tilde(table.row_margins()) == Catch::Approx(oracle::ucentred_dcov(sample.x, sample.x)).margin(1e-12));
    CHECK(omega_tilde(table.col_margins()) == Catch::Approx(oracle::ucentred_dcov(sample.y, sample.y)).margin(1e-12));
  }
}

TEST_CASE("delta_hat equals the double-centred V-statistic", "[estimators]") {
  RandomStream s(303);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(s.uniform01() * 20);
    const auto sample = oracle::random_sample(s, n, 4, 3);
    const auto table = table_from_sample(sample, 4, 3);
    CHECK(delta_hat(table) == Catch::Approx(oracle::vstat_dcov(sample.x, sample.y)).margin(1e-13));
    CHECK(delta_hat(table) == delta_pop(mle_pmf(table)));
  }
}

TEST_CASE("delta_tilde is unbiased by exhaustive enumeration", "[estimators]") {
  for (const auto& probs : std::vector<std::vector<double>>{{0.25, 0.25, 0.25, 0.25}, {0.4, 0.1, 0.2, 0.3},
                                                           {0.7, 0.05, 0.05, 0.2}}) {
    const JointPMF pmf(2, 2, probs);
    for (int n : {4, 5, 6}) {
      double mean = 0.0;
      oracle::enumerate_multinomial(probs, n, [&](const std::vector<Count>& c, double p) {
        mean += p * delta_tilde(ContingencyTable(2, 2, c));
      });
      CHECK(mean == Catch::Approx(delta_pop(pmf)).margin(1e-12));
    }
  }
}

TEST_CASE("omega_tilde is unbiased for the population distance variance", "[estimators]") {
  const std::vector<double> p{0.5, 0.3, 0.2};
  double pop = 0.0;  // delta of (X, X)
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double r = (i == j ? p[i] : 0.0) - p[i] * p[j];
      pop += r * r;
    }
  double mean = 0.0;
  oracle::enumerate_multinomial(p, 6, [&](const std::vector<Count>& c, double pr) { mean += pr * omega_tilde(c); });
  CHECK(mean == Catch::Approx(pop).margin(1e-12));
}

TEST_CASE("balanced 2x2 table values", "[estimators]") {
  const auto t = ContingencyTable::from_rows({{5, 5}, {5, 5}});
  CHECK(delta_hat(t) == 0.0);
  CHECK(delta_tilde(t) == Catch::Approx(-0.015479876160990712).epsilon(1e-14));
  CHECK(omega_tilde(t.row_margins()) == Catch::Approx(0.2786377708978328).epsilon(1e-14));
  CHECK(bcdcor_stat(t) == Catch::Approx(-10.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("perfect association 2x2 table values", "[estimators]") {
  const auto t = ContingencyTable::from_rows({{10, 0}, {0, 10}});
  CHECK(delta_hat(t) == Catch::Approx(0.25));
  CHECK(bcdcor_stat(t) == Catch::Approx(20.0).epsilon(1e-13));
  const auto pc = pearson_chi2(t);
  CHECK(pc.eta_hat == Catch::Approx(1.0));
  CHECK(pc.scaled == Catch::Approx(20.0));
  CHECK(pc.df == 1);
  CHECK(lrt_g(t) == Catch::Approx(1.3862943611198906).epsilon(1e-14));
}

TEST_CASE("pearson_chi2 matches the textbook sum", "[estimators]") {
  RandomStream s(404);
  for (int rep = 0; rep < 50; ++rep) {
    const auto sample = oracle::random_sample(s, 40, 3, 5);
    const auto t = table_from_sample(sample, 3, 5);
    const double n = static_cast<double>(t.total());
    double x2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        const double e = static_cast<double>(t.row_margins()[i] * t.col_margins()[j]) / n;
        if (e > 0) x2 += (static_cast<double>(t(i, j)) - e) * (static_cast<double>(t(i, j)) - e) / e;
      }
    CHECK(pearson_chi2(t).scaled == Catch::Approx(x2).epsilon(1e-12));
  }
}

TEST_CASE("pearson df counts only nonempty rows and columns", "[estimators]") {
  const auto t = ContingencyTable::from_rows({{3, 0, 1}, {0, 0, 0}, {2, 0, 4}});
  CHECK(pearson_chi2(t).df == 1);
}

TEST_CASE("constant variables", "[estimators]") {
  const auto t = ContingencyTable::from_rows({{7}});
  const auto c = ustat_components_xy(t);
  CHECK(c.t1 == 0.0);
  CHECK(c.t2 == 0.0);
  CHECK(c.t3 == 0.0);
  const std::vector<Count> one{9};
  CHECK(omega_tilde(one) == 0.0);
  CHECK_THROWS_AS(bcdcor_stat(ContingencyTable::from_rows({{4, 3}, {0, 0}})), DegenerateError);
}

TEST_CASE("U-statistics need n >= 4", "[estimators]") {
  CHECK_THROWS_AS(delta_tilde(ContingencyTable::from_rows({{1, 1}, {1, 0}})), InsufficientSampleError);
  CHECK_THROWS_AS(bcdcor_stat(ContingencyTable::from_rows({{1, 1}, {1, 0}})), InsufficientSampleError);
}

TEST_CASE("delta_pop vanishes exactly on product pmfs", "[estimators]") {
  const std::vector<double> a{0.2, 0.3, 0.5}, b{0.6, 0.4};
  CHECK(delta_pop(product_pmf(a, b)) == Catch::Approx(0.0).margin(1e-17));
  CHECK(eta_pop(product_pmf(a, b)) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("n |delta_tilde - delta_hat| stays bounded", "[estimators]") {
  RandomStream s(505);
  const auto pmf = oracle::random_pmf(s, 4, 4);
  double worst = 0.0;
  for (std::size_t n : {50, 100, 200, 400, 800, 1600, 3200}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto t = table_from_sample(sample_pmf(pmf, n, s), 4, 4);
      worst = std::max(worst, static_cast<double>(n) * std::abs(delta_tilde(t) - delta_hat(t)));
    }
  }
  CHECK(worst <= 20.0);
}
