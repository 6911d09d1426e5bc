#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "teamscope/econometrics.hpp"
#include "teamscope/error.hpp"

using namespace teamscope;

TEST_CASE("exact linear fit") {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10};
  const std::vector<Regressor> xs{{"x", x}};
  const auto r = ols(y, xs);
  CHECK(r.find("x")->estimate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(r.find("intercept")->estimate) < 1e-12);
  CHECK(r.r2 == doctest::Approx(1.0));
  CHECK(r.dof == 3);

  const std::vector<double> flat(5, 3.0);
  const auto c = ols(flat, xs);
  CHECK(std::abs(c.find("x")->estimate) < 1e-12);
}

TEST_CASE("OLS matches the normal equations") {
  Rng rng(101);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 15 + uniform_index(rng, 30), k = 1 + uniform_index(rng, 4);
    std::vector<Regressor> xs(k);
    for (std::size_t j = 0; j < k; ++j) {
      xs[j].name = "x" + std::to_string(j);
      for (std::size_t i = 0; i < n; ++i) xs[j].values.push_back(standard_normal(rng));
    }
    std::vector<double> y(n);
    for (auto& v : y) v = standard_normal(rng);
    const auto r = ols(y, xs);
    const auto beta = testsupport::normal_equations(y, xs, true);
    for (std::size_t c = 0; c < r.coefficients.size(); ++c) {
      CHECK(std::abs(r.coefficients[c].estimate - beta(static_cast<Eigen::Index>(c))) <= 1e-10);
    }
  }
}

TEST_CASE("standard errors match the textbook formula") {
  Rng rng(5);
  const std::size_t n = 40;
  std::vector<Regressor> xs{{"a", {}}, {"b", {}}};
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[0].values.push_back(standard_normal(rng));
    xs[1].values.push_back(standard_normal(rng));
    y[i] = 1.0 + 0.5 * xs[0].values[i] + standard_normal(rng);
  }
  const auto r = ols(y, xs);
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X(Eigen::Index(i), 0) = 1.0;
    X(Eigen::Index(i), 1) = xs[0].values[i];
    X(Eigen::Index(i), 2) = xs[1].values[i];
    Y(Eigen::Index(i)) = y[i];
  }
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  const Eigen::VectorXd beta = xtx_inv * X.transpose() * Y;
  const double s2 = (Y - X * beta).squaredNorm() / double(n - 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK(r.coefficients[std::size_t(c)].se == doctest::Approx(std::sqrt(s2 * xtx_inv(c, c))).epsilon(1e-9));
  }
  CHECK(r.sigma2 == doctest::Approx(s2).epsilon(1e-9));
}

TEST_CASE("collinear designs are refused with the column names") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> twice;
  for (double v : x) twice.push_back(2 * v);
  const std::vector<Regressor> xs{{"x", x}, {"double_x", twice}};
  const std::vector<double> y{1, 3, 2, 5, 4};
  try {
    ols(y, xs);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("double_x") != std::string::npos);
  }
  const std::vector<Regressor> one{{"x", {1, 2}}};
  const std::vector<double> y2{1, 2};
  CHECK_THROWS_AS(ols(y2, one), DataError);
}

TEST_CASE("within estimator recovers a shared slope") {
  std::vector<double> x, y;
  std::vector<std::string> e;
  for (int i = 0; i < 6; ++i) {
    x.push_back(i);
    y.push_back(10.0 + 1.5 * i);
    e.push_back("a");
    x.push_back(i * 2.0);
    y.push_back(-4.0 + 1.5 * i * 2.0);
    e.push_back("b");
  }
  const std::vector<Regressor> xs{{"x", x}};
  const auto r = within_fixed_effects(y, xs, e);
  CHECK(r.find("x")->estimate == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.entities == 2);
}

TEST_CASE("within estimator equals dummy-variable OLS") {
  Rng rng(202);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 20 + uniform_index(rng, 20), k = 1 + uniform_index(rng, 3);
    std::vector<std::string> e(n);
    std::vector<double> fe(5);
    for (auto& f : fe) f = 3.0 * standard_normal(rng);
    for (std::size_t i = 0; i < n; ++i) e[i] = "e" + std::to_string(i % 5);
    std::vector<Regressor> xs(k);
    for (std::size_t j = 0; j < k; ++j) {
      xs[j].name = "x" + std::to_string(j);
      for (std::size_t i = 0; i < n; ++i) xs[j].values.push_back(standard_normal(rng) + fe[i % 5]);
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = fe[i % 5] + standard_normal(rng);
      for (std::size_t j = 0; j < k; ++j) y[i] += 0.3 * double(j + 1) * xs[j].values[i];
    }
    const auto r = within_fixed_effects(y, xs, e);
    const auto beta = testsupport::dummy_ols(y, xs, e);
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(r.coefficients[j].estimate - beta(Eigen::Index(j))) <= 1e-8);
    CHECK(r.dof == n - k - 5);
  }
}

TEST_CASE("singletons are dropped and an all-singleton panel is refused") {
  const std::vector<double> y{1, 2, 3, 4, 5, 9};
  const std::vector<Regressor> xs{{"x", {1, 2, 4, 3, 5, 7}}};
  const std::vector<std::string> e{"a", "a", "b", "b", "b", "c"};
  const auto r = within_fixed_effects(y, xs, e);
  CHECK(r.singletons_dropped == 1);
  CHECK(r.n == 5);

  const std::vector<std::string> all_single{"a", "b", "c", "d", "e", "f"};
  CHECK_THROWS_AS(within_fixed_effects(y, xs, all_single), DataError);

  const std::vector<Regressor> constant{{"x", {1, 1, 2, 2, 2, 7}}};
  CHECK_THROWS_AS(within_fixed_effects(y, constant, e), DataError);
}

TEST_CASE("pearson correlation") {
  const std::vector<double> x{1, 2, 3, 4};
  std::vector<double> affine, neg;
  for (double v : x) {
    affine.push_back(3 * v + 1);
    neg.push_back(-v);
  }
  CHECK(*pearson(x, affine) == doctest::Approx(1.0));
  CHECK(*pearson(x, neg) == doctest::Approx(-1.0));
  const std::vector<double> flat(4, 2.0);
  CHECK_FALSE(pearson(x, flat).has_value());

  Rng rng(303);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(30), b(30);
    for (std::size_t i = 0; i < 30; ++i) {
      a[i] = standard_normal(rng);
      b[i] = a[i] + standard_normal(rng);
    }
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      ma += a[i] / 30;
      mb += b[i] / 30;
    }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    CHECK(std::abs(*pearson(a, b) - sab / std::sqrt(saa * sbb)) <= 1e-12);
  }
}

TEST_CASE("bootstrap curve basics") {
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i / 40.0);
    y.push_back(i < 20 ? 1.0 : double(i));
  }
  CurveOptions o;
  o.bins = 2;
  o.replicates = 200;
  o.seed = 3;
  const auto bins = bootstrap_binned_curve(x, y, o);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].n == 20);
  CHECK(bins[0].ci_low == 1.0);
  CHECK(bins[0].ci_high == 1.0);
  for (const auto& b : bins) {
    CHECK(b.ci_low <= b.mean_y);
    CHECK(b.mean_y <= b.ci_high);
  }
  const auto again = bootstrap_binned_curve(x, y, o);
  CHECK(again[1].ci_low == bins[1].ci_low);
  CHECK(again[1].ci_high == bins[1].ci_high);
  o.threads = 3;
  const auto threaded = bootstrap_binned_curve(x, y, o);
  CHECK(threaded[1].ci_low == bins[1].ci_low);
  CHECK(threaded[1].ci_high == bins[1].ci_high);
}
