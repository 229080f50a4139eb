#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rlasso/error.hpp"
#include "rlasso/evaluation.hpp"

using namespace rlasso;

TEST_SUITE("evaluation") {

TEST_CASE("design covariance structures") {
  const MatrixXd cs = design_covariance(4, Structure::kCS, 0.3);
  CHECK(cs(0, 3) == 0.3);
  CHECK(cs(2, 2) == 1.0);
  const MatrixXd ar = design_covariance(4, Structure::kAR, 0.5);
  CHECK(ar(0, 3) == doctest::Approx(0.125));
  CHECK(design_covariance(3, Structure::kIS, 0.9).isIdentity());
}

TEST_CASE("generated designs reproduce their covariance") {
  for (auto [s, rho] : {std::pair{Structure::kIS, 0.0}, std::pair{Structure::kCS, 0.5},
                        std::pair{Structure::kAR, 0.7}}) {
    Rng rng(61);
    const MatrixXd X = generate_design(10000, 5, s, rho, rng);
    const MatrixXd centred = X.rowwise() - X.colwise().mean();
    const MatrixXd emp = centred.transpose() * centred / 9999.0;
    CHECK((emp - design_covariance(5, s, rho)).norm() < 0.1);
  }
  Rng rng(62);
  CHECK_THROWS_AS(generate_design(10, 3, Structure::kCS, -0.9, rng), ConfigError);
}

TEST_CASE("noiseless response") {
  Rng rng(63);
  const MatrixXd X = generate_design(20, 3, Structure::kIS, 0.0, rng);
  VectorXd b(3);
  b << 1.0, 0.0, -2.0;
  CHECK(generate_response(X, b, 0.0, rng).isApprox(X * b));
  CHECK_THROWS_AS(generate_response(X, VectorXd::Ones(2), 1.0, rng), ConfigError);
}

TEST_CASE("balanced accuracy") {
  CHECK(*balanced_accuracy({0, 1}, {0}, 20) == doctest::Approx(0.5 * (1.0 + 18.0 / 19.0)));
  CHECK(*balanced_accuracy({0, 1}, {0}, 20) == doctest::Approx(0.9737).epsilon(1e-4));
  Support all(6);
  std::iota(all.begin(), all.end(), Index{0});
  CHECK_FALSE(balanced_accuracy(all, all, 6).has_value());
  CHECK_FALSE(balanced_accuracy({1}, {}, 6).has_value());
  // Exactly 1 iff the supports agree.
  Rng rng(64);
  for (int rep = 0; rep < 200; ++rep) {
    Support sel, truth;
    for (Index j = 0; j < 8; ++j) {
      if (rng.uniform() < 0.4) sel.push_back(j);
      if (rng.uniform() < 0.4) truth.push_back(j);
    }
    const auto bar = balanced_accuracy(sel, truth, 8);
    if (!bar) continue;
    CHECK(*bar >= 0.0);
    CHECK(*bar <= 1.0);
    CHECK((*bar == 1.0) == (sel == truth));
  }
}

TEST_CASE("scenario table") {
  const auto ids = scenario_ids();
  CHECK(ids.size() == 24);
  for (const auto& id : ids) CHECK_NOTHROW(scenario(id).validate());
  const ScenarioSpec one = scenario("I");
  CHECK(one.n == 50);
  CHECK(one.p == 20);
  CHECK(one.beta0(0) == 5.0);
  CHECK(one.beta0.tail(19).isZero());
  CHECK_THROWS_AS(scenario("XXV"), ConfigError);
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::kBayesA, Method::kBayesB, Method::kBayesC, Method::kRLasso, Method::kOls}) {
    CHECK(method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(method_from_string("lasso"), ConfigError);
}

TEST_CASE("k-fold partitions cover every row once") {
  Rng rng(65);
  for (Index n : {10, 11, 37}) {
    const auto folds = kfold_partition(n, 5, rng);
    REQUIRE(folds.size() == 5);
    std::set<Index> seen;
    std::size_t lo = n, hi = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      for (Index i : f) CHECK(seen.insert(i).second);
    }
    CHECK(static_cast<Index>(seen.size()) == n);
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("noiseless OLS cross-validation error vanishes") {
  Rng rng(66);
  const MatrixXd X = generate_design(60, 4, Structure::kAR, 0.5, rng);
  VectorXd b(4);
  b << 1.0, -2.0, 0.5, 3.0;
  const VectorXd y = (X * b).array() + 7.0;
  const CvResult cv = kfold_cv(y, X, 5, 2, Method::kOls, MethodConfig{}, 3);
  CHECK(cv.mspe < 1e-10);
  CHECK(cv.model_size == 4.0);
  CHECK(cv.fold_mse.size() == 10);
}

TEST_CASE("cross-validation standardizes on training rows only") {
  // OLS with an intercept fitted on the training rows alone is the oracle;
  // any leakage of test-row moments into the centring changes the fit.
  Rng rng(67);
  MatrixXd X = generate_design(40, 3, Structure::kIS, 0.0, rng);
  X.col(1).array() += 10.0;
  VectorXd b(3);
  b << 1.0, 2.0, -1.0;
  VectorXd y = generate_response(X, b, 1.0, rng);
  y.head(5).array() += 25.0;  // shift a few rows so fold moments differ
  const std::uint64_t seed = 8;
  const CvResult cv = kfold_cv(y, X, 4, 1, Method::kOls, MethodConfig{}, seed);
  Rng prng(seed, 1);
  const auto folds = kfold_partition(40, 4, prng);
  for (int f = 0; f < 4; ++f) {
    std::vector<Index> train;
    for (int g = 0; g < 4; ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    MatrixXd A(static_cast<Index>(train.size()), 4);
    VectorXd t(static_cast<Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      A(static_cast<Index>(i), 0) = 1.0;
      A.row(static_cast<Index>(i)).tail(3) = X.row(train[i]);
      t(static_cast<Index>(i)) = y(train[i]);
    }
    const VectorXd coef = A.colPivHouseholderQr().solve(t);
    double sse = 0.0;
    for (Index i : folds[static_cast<std::size_t>(f)]) {
      const double pred = coef(0) + X.row(i).dot(coef.tail(3));
      sse += (y(i) - pred) * (y(i) - pred);
    }
    const double expect = sse / static_cast<double>(folds[static_cast<std::size_t>(f)].size());
    CHECK(cv.fold_mse[static_cast<std::size_t>(f)] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("cross-validation argument checks") {
  const MatrixXd X = MatrixXd::Random(8, 2);
  const VectorXd y = VectorXd::Random(8);
  CHECK_THROWS_AS(kfold_cv(y, X, 1, 1, Method::kOls, MethodConfig{}, 1), ConfigError);
  CHECK_THROWS_AS(kfold_cv(y, X, 5, 1, Method::kOls, MethodConfig{}, 1), DataError);
}

TEST_CASE("cross-validation is thread-count invariant") {
  Rng rng(68);
  const MatrixXd X = generate_design(50, 6, Structure::kIS, 0.0, rng);
  VectorXd b = VectorXd::Zero(6);
  b(0) = 2.0;
  const VectorXd y = generate_response(X, b, 1.0, rng);
  const auto a = kfold_cv(y, X, 5, 1, Method::kRLasso, MethodConfig{}, 4, 1);
  const auto c = kfold_cv(y, X, 5, 1, Method::kRLasso, MethodConfig{}, 4, 3);
  CHECK(a.fold_mse == c.fold_mse);
  CHECK(a.model_size == c.model_size);
}

TEST_CASE("scenario runs are deterministic") {
  ScenarioSpec spec = scenario("I");
  MethodConfig cfg;
  cfg.iterations = 600;
  cfg.burn_in = 100;
  const std::vector<Method> methods{Method::kBayesC, Method::kRLasso, Method::kOls};
  const ScenarioResult a = run_scenario(spec, 2, methods, cfg, 11);
  const ScenarioResult b = run_scenario(spec, 2, methods, cfg, 11, 2);
  REQUIRE(a.records.size() == 6);
  REQUIRE(b.records.size() == 6);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].mse == b.records[i].mse);
    CHECK(a.records[i].model_size == b.records[i].model_size);
    CHECK(a.records[i].bar == b.records[i].bar);
  }
  CHECK(a.failures.empty());
  for (const auto& s : a.summaries) CHECK(s.completed == 2);
  const ScenarioResult other = run_scenario(spec, 2, methods, cfg, 12);
  CHECK(other.records[0].mse != a.records[0].mse);
}

}
