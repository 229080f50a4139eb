#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlasso/error.hpp"
#include "rlasso/model.hpp"
#include "rlasso/rng.hpp"

using namespace rlasso;

namespace {

MatrixXd random_matrix(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd X(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) X(i, j) = 3.0 * rng.normal() + static_cast<double>(j);
  return X;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("standardize centres and scales to unit sample sd") {
  const MatrixXd X = random_matrix(40, 4, 3);
  Rng rng(9);
  VectorXd y(40);
  for (Index i = 0; i < 40; ++i) y(i) = 10.0 + rng.normal();
  const RegressionData d = standardize(y, X, {"a", "b", "c", "d"});
  const auto ref = oracle::standardize(y, X);
  CHECK((d.X - ref.X).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.y - ref.y).cwiseAbs().maxCoeff() < 1e-12);
  for (Index j = 0; j < 4; ++j) {
    CHECK(std::abs(d.X.col(j).mean()) < 1e-12);
    CHECK(std::abs(d.X.col(j).squaredNorm() / 39.0 - 1.0) < 1e-12);
  }
  CHECK(d.names[2] == "c");
}

TEST_CASE("constant column is rejected by name") {
  MatrixXd X = random_matrix(10, 3, 1);
  X.col(1).setConstant(4.0);
  VectorXd y = VectorXd::LinSpaced(10, 0.0, 1.0);
  try {
    standardize(y, X, {"u", "flat", "w"});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("flat") != std::string::npos);
  }
}

TEST_CASE("non-finite entry names its row") {
  MatrixXd X = random_matrix(10, 2, 1);
  X(6, 1) = std::nan("");
  VectorXd y = VectorXd::LinSpaced(10, 0.0, 1.0);
  try {
    standardize(y, X);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 6") != std::string::npos);
  }
}

TEST_CASE("transform applies training moments to new rows") {
  const MatrixXd X = random_matrix(30, 3, 5);
  const VectorXd y = X.col(0) * 2.0;
  const RegressionData d = standardize(y, X);
  const MatrixXd fresh = random_matrix(5, 3, 77);
  const MatrixXd t = d.transform(fresh);
  for (Index j = 0; j < 3; ++j) {
    const VectorXd expect =
        (fresh.col(j).array() - d.column_means(j)) / d.column_scales(j);
    CHECK((t.col(j) - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  // raw-scale coefficients reproduce standardized predictions
  const VectorXd beta = VectorXd::LinSpaced(3, -1.0, 2.0);
  const VectorXd raw = d.to_raw_coefficients(beta);
  const VectorXd pred = (fresh * raw).array() + d.raw_intercept(beta);
  CHECK((pred - d.predict_raw(fresh, beta)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("quantile uses linear interpolation between order statistics") {
  CHECK(quantile({1, 2, 3, 4, 100}, 0.5) == doctest::Approx(3.0));
  CHECK(quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5}, 0.9) == doctest::Approx(5.0));
  CHECK(median({1, 2, 3, 4}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(quantile({}, 0.5), DataError);
}

TEST_CASE("batch means standard error of iid draws") {
  Rng rng(21);
  VectorXd v(10000);
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  const double se = batch_means_se(v);
  CHECK(se > 0.005);
  CHECK(se < 0.02);
}

TEST_CASE("chain configuration validation") {
  MCMCConfig c;
  c.iterations = 100;
  c.burn_in = 1000;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.burn_in = 10;
  CHECK_NOTHROW(c.validate());
  CHECK(c.kept() == 90);
  c.fix_sigma2 = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("prior specification") {
  PriorSpec p;
  p.family = IggFamily{1.0};
  CHECK(p.is_ide());
  p.family = IggFamily{2.0};
  CHECK_FALSE(p.is_ide());
  p.family = IggFamily{-1.0};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.family = IdeFamily{};
  p.lambda_mode = FixedLambda{0.0};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK(sampler_from_string("smdp") == SamplerKind::kSmdp);
  CHECK_THROWS_AS(sampler_from_string("nuts"), ConfigError);
}

TEST_CASE("state invariants") {
  ChainState s;
  s.beta = VectorXd::Constant(2, 0.5);
  s.u = VectorXd::Constant(2, 3.0);
  s.sigma2 = 1.0;
  CHECK(check_state(s, SamplerKind::kSmdp).empty());
  s.u(1) = 1.5;
  CHECK_FALSE(check_state(s, SamplerKind::kSmdp).empty());
  s.u(1) = 3.0;
  s.tau = VectorXd::Ones(2);
  CHECK_FALSE(check_state(s, SamplerKind::kSmdp).empty());  // SMDP never carries tau
  s.zeta = VectorXd::Ones(2);
  s.sigma2 = 2.0;  // beta^2 u^2 = 2.25
  CHECK(check_state(s, SamplerKind::kSmtn).empty());
  s.sigma2 = 2.3;
  CHECK_FALSE(check_state(s, SamplerKind::kSmtn).empty());
  s.sigma2 = 1.0;
  s.beta(0) = 0.0;
  CHECK_FALSE(check_state(s, SamplerKind::kSmtn).empty());
}

TEST_CASE("summaries of a known sample") {
  PosteriorDraws d;
  d.beta.resize(5, 1);
  d.beta << 1, 2, 3, 4, 100;
  d.lambda = VectorXd::LinSpaced(5, 1.0, 5.0);
  const FitSummary s = summarize(d, 0.5);
  CHECK(s.posterior_mean(0) == doctest::Approx(22.0));
  CHECK(s.posterior_median(0) == doctest::Approx(3.0));
  CHECK(s.ci_lower(0) == doctest::Approx(2.0));
  CHECK(s.ci_upper(0) == doctest::Approx(4.0));
  CHECK(*s.lambda_median == doctest::Approx(3.0));
}

}
