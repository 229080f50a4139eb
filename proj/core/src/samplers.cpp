#include "rlasso/samplers.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "rlasso/distributions.hpp"
#include "rlasso/error.hpp"
#include "rlasso/hyperparam.hpp"

namespace rlasso {

GramCache::GramCache(const RegressionData& data)
    : xtx(data.X.transpose() * data.X),
      xty(data.X.transpose() * data.y),
      yty(data.y.squaredNorm()),
      n(data.n),
      p(data.p) {}

namespace {

double residual_ss(const GramCache& g, const VectorXd& beta) {
  // y'y - 2 b'X'y + b'X'Xb can go slightly negative through cancellation
  const double r = g.yty - 2.0 * beta.dot(g.xty) + beta.dot(g.xtx * beta);
  return std::max(r, 0.0);
}

}  // namespace

SmdpKernel::SmdpKernel(const RegressionData& data) : gram_(data) {
  if (data.n <= data.p) {
    throw ConfigError("SMDP sampler requires n > p (n=" + std::to_string(data.n) +
                      ", p=" + std::to_string(data.p) + "); use smtn");
  }
  Eigen::LDLT<MatrixXd> ldlt(gram_.xtx);
  const VectorXd d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-10 * d.maxCoeff())) {
    throw NumericError("SMDP sampler: X'X is singular");
  }
  beta_mle_ = ldlt.solve(gram_.xty);
}

ChainState SmdpKernel::step(const ChainState& s, Rng& rng, const StepOptions& opts) const {
  const Index p = gram_.p;
  ChainState next = s;
  for (Index j = 0; j < p; ++j) {
    next.u(j) = sample_exp_lower_truncated(s.lambda, 1.0 / std::abs(s.beta(j)), rng);
  }
  if (opts.fix_sigma2) {
    next.sigma2 = *opts.fix_sigma2;
  } else {
    const double rss = residual_ss(gram_, next.beta);
    next.sigma2 = sample_inverse_gamma(0.5 * static_cast<double>(gram_.n - 1), 0.5 * rss, rng);
  }
  const MatrixXd precision = gram_.xtx / next.sigma2;
  const VectorXd linear = gram_.xty / next.sigma2;
  const VectorXd thresholds = next.u.cwiseInverse();
  mid_truncated_mvn_sweep(precision, linear, thresholds, next.beta, opts.mvn_sweeps, rng);
  return next;
}

SmtnKernel::SmtnKernel(const RegressionData& data) : gram_(data) {}

ChainState SmtnKernel::step(const ChainState& s, Rng& rng, const StepOptions& opts) const {
  const Index p = gram_.p;
  ChainState next = s;
  const double sigma = std::sqrt(s.sigma2);
  for (Index j = 0; j < p; ++j) {
    next.u(j) = sample_exp_lower_truncated(s.lambda, sigma / std::abs(s.beta(j)), rng);
  }
  for (Index j = 0; j < p; ++j) {
    const double rate = std::abs(s.beta(j)) / sigma + 1.0 / next.u(j);
    next.zeta(j) = rng.gamma(2.0, rate);
  }
  for (Index j = 0; j < p; ++j) {
    const double z = next.zeta(j);
    const double mean = z * sigma / std::abs(s.beta(j));
    next.tau(j) = 1.0 / sample_inverse_gaussian(mean, z * z, rng);
  }
  if (opts.fix_sigma2) {
    next.sigma2 = *opts.fix_sigma2;
  } else {
    const double rss = residual_ss(gram_, s.beta);
    const double shrink = (s.beta.array().square() / next.tau.array()).sum();
    const double cap = (s.beta.array().square() * next.u.array().square()).minCoeff();
    next.sigma2 = sample_upper_truncated_inverse_gamma(
        0.5 * static_cast<double>(gram_.n - 1 + p), 0.5 * (rss + shrink), cap, rng);
  }
  MatrixXd precision = gram_.xtx;
  precision.diagonal() += next.tau.cwiseInverse();
  precision /= next.sigma2;
  const VectorXd linear = gram_.xty / next.sigma2;
  const VectorXd thresholds = std::sqrt(next.sigma2) * next.u.cwiseInverse();
  mid_truncated_mvn_sweep(precision, linear, thresholds, next.beta, opts.mvn_sweeps, rng);
  return next;
}

ChainState smdp_step(const ChainState& state, const SmdpKernel& kernel, Rng& rng,
                     const StepOptions& opts) {
  return kernel.step(state, rng, opts);
}

ChainState smtn_step(const ChainState& state, const SmtnKernel& kernel, Rng& rng,
                     const StepOptions& opts) {
  return kernel.step(state, rng, opts);
}

ChainState initial_state(const RegressionData& data, SamplerKind kind, double lambda,
                         std::optional<double> fix_sigma2) {
  const Index p = data.p;
  MatrixXd ridge = data.X.transpose() * data.X;
  ridge.diagonal().array() += 1.0;
  ChainState s;
  s.beta = ridge.llt().solve(data.X.transpose() * data.y);
  for (Index j = 0; j < p; ++j) {
    if (s.beta(j) == 0.0) s.beta(j) = 1e-3;
  }
  s.sigma2 = fix_sigma2 ? *fix_sigma2
                        : std::max((data.y - data.X * s.beta).squaredNorm() /
                                       static_cast<double>(data.n),
                                   1e-8);
  s.lambda = lambda;
  if (kind == SamplerKind::kSmdp) {
    s.u = s.beta.cwiseAbs().cwiseInverse().array() + 1.0;
  } else {
    // Shifted by sigma so that beta^2 u^2 > sigma^2 holds at the start.
    const double sigma = std::sqrt(s.sigma2);
    s.u = (sigma * s.beta.cwiseAbs().cwiseInverse()).array() + 1.0;
    s.tau = VectorXd::Ones(p);
    s.zeta = VectorXd::Ones(p);
  }
  return s;
}

PosteriorDraws run_chain(const RegressionData& data, const PriorSpec& prior,
                         const MCMCConfig& config, const std::optional<ChainState>& init,
                         const IterationObserver& observer) {
  config.validate();
  prior.validate();
  if (!prior.is_ide()) {
    throw ConfigError("the Gibbs samplers support the IDE prior only (IGG with alpha = 1)");
  }
  if (std::holds_alternative<McemLambda>(prior.lambda_mode)) {
    throw ConfigError("run_chain: MCEM lambda mode must be driven by run_mcem");
  }
  const auto* hyper = std::get_if<HyperpriorLambda>(&prior.lambda_mode);

  std::optional<SmdpKernel> smdp;
  std::optional<SmtnKernel> smtn;
  if (config.sampler == SamplerKind::kSmdp) {
    smdp.emplace(data);
  } else {
    smtn.emplace(data);
  }

  ChainState state;
  if (init) {
    state = *init;
    if (const auto* fixed = std::get_if<FixedLambda>(&prior.lambda_mode)) state.lambda = fixed->lambda;
    if (config.fix_sigma2) state.sigma2 = *config.fix_sigma2;
  } else if (hyper) {
    state = initial_state(data, config.sampler, 1.0, config.fix_sigma2);
    // Start lambda at its full-conditional mean given the initial beta.
    state.lambda = (hyper->a + 2.0 * static_cast<double>(data.p)) /
                   (hyper->b + state.beta.cwiseAbs().cwiseInverse().sum());
  } else {
    state = initial_state(data, config.sampler, std::get<FixedLambda>(prior.lambda_mode).lambda,
                          config.fix_sigma2);
  }
  if (const std::string bad = check_state(state, config.sampler); !bad.empty()) {
    throw NumericError("run_chain: infeasible initial state: " + bad);
  }

  const Index kept = config.kept();
  PosteriorDraws out;
  out.config = config;
  out.prior = prior;
  out.beta.resize(kept, data.p);
  out.sigma2.resize(kept);
  if (hyper) out.lambda.resize(kept);
  if (config.keep_u) out.u.resize(kept, data.p);
  if (!hyper) out.lambda_point = state.lambda;

  Rng rng(config.seed);
  const StepOptions opts{config.inner_mvn_sweeps, config.fix_sigma2};
  const HyperpriorParams hp = hyper ? HyperpriorParams{hyper->a, hyper->b} : HyperpriorParams{};
  for (int it = 1; it <= config.iterations; ++it) {
    try {
      state = smdp ? smdp->step(state, rng, opts) : smtn->step(state, rng, opts);
      if (hyper) state.lambda = update_lambda_hyperprior(state.beta, hp, rng);
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(it) + ": " + e.what());
    }
    if (it > config.burn_in) {
      const Index row = it - config.burn_in - 1;
      out.beta.row(row) = state.beta.transpose();
      out.sigma2(row) = state.sigma2;
      if (hyper) out.lambda(row) = state.lambda;
      if (config.keep_u) out.u.row(row) = state.u.transpose();
    }
    if (observer) observer(it, state);
  }
  out.terminal = state;
  return out;
}

double effective_sample_size(const VectorXd& draws) {
  const Index n = draws.size();
  if (n < 100) {
    throw ConfigError("effective_sample_size: need at least 100 draws, got " + std::to_string(n));
  }
  const VectorXd c = draws.array() - draws.mean();
  const double gamma0 = c.squaredNorm() / static_cast<double>(n);
  if (!(gamma0 > 0.0)) {
    std::cerr << "warning: effective_sample_size: degenerate (constant) chain\n";
    return 0.0;
  }
  auto autocov = [&](Index lag) {
    return c.head(n - lag).dot(c.tail(n - lag)) / static_cast<double>(n);
  };
  // Sum consecutive-pair autocovariances until the first non-positive pair.
  double sum_pairs = 0.0;
  for (Index m = 0; 2 * m + 1 < n; ++m) {
    const double pair = (m == 0 ? gamma0 : autocov(2 * m)) + autocov(2 * m + 1);
    if (!(pair > 0.0)) break;
    sum_pairs += pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum_pairs / gamma0, 1.0 / static_cast<double>(n));
  return static_cast<double>(n) / tau;
}

}  // namespace rlasso
