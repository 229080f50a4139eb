#include "rlasso/hyperparam.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "rlasso/error.hpp"
#include "rlasso/samplers.hpp"
#include "rlasso/special.hpp"

namespace rlasso {

NullReference null_reference(const RegressionData& data) {
  const MatrixXd xtx = data.X.transpose() * data.X;
  NullReference ref;
  if (data.n > data.p) {
    Eigen::LDLT<MatrixXd> ldlt(xtx);
    const VectorXd d = ldlt.vectorD();
    if (ldlt.info() == Eigen::Success && d.minCoeff() > 1e-10 * d.maxCoeff()) {
      const VectorXd beta = ldlt.solve(data.X.transpose() * data.y);
      ref.sigma2_hat = (data.y - data.X * beta).squaredNorm() / static_cast<double>(data.n - data.p);
      const MatrixXd inv = ldlt.solve(MatrixXd::Identity(data.p, data.p));
      ref.variance = ref.sigma2_hat * inv.diagonal().mean();
      return ref;
    }
  }
  MatrixXd ridge = xtx;
  ridge.diagonal().array() += 1.0;
  Eigen::LLT<MatrixXd> llt(ridge);
  const VectorXd beta = llt.solve(data.X.transpose() * data.y);
  ref.sigma2_hat = (data.y - data.X * beta).squaredNorm() / static_cast<double>(data.n);
  const MatrixXd inv = llt.solve(MatrixXd::Identity(data.p, data.p));
  ref.variance = ref.sigma2_hat * inv.diagonal().mean();
  return ref;
}

double prior_null_overlap(double lambda, double null_variance) {
  if (!(lambda > 0.0) || !(null_variance > 0.0)) {
    throw NumericError("prior_null_overlap: lambda and variance must be positive");
  }
  const double sd = std::sqrt(null_variance);
  const double log_norm = -0.5 * std::log(2.0 * M_PI * null_variance);
  // log normal density minus log IDE density on b > 0
  auto diff = [&](double b) {
    return log_norm - b * b / (2.0 * null_variance) - std::log(0.5 * lambda) + 2.0 * std::log(b) +
           lambda / b;
  };
  const double scale = std::max(sd, lambda);
  const double lo = 1e-8 * std::min(sd, lambda);
  const double hi = 1e3 * scale;
  constexpr int kGrid = 4000;
  const double step = std::log(hi / lo) / kGrid;

  std::vector<double> cuts{0.0};
  double prev_b = lo;
  double prev_d = diff(prev_b);
  for (int k = 1; k <= kGrid; ++k) {
    const double b = lo * std::exp(step * k);
    const double d = diff(b);
    if ((prev_d > 0.0) != (d > 0.0)) {
      boost::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(
          diff, prev_b, b, prev_d, d, boost::math::tools::eps_tolerance<double>(50), iters);
      cuts.push_back(0.5 * (root.first + root.second));
    }
    prev_b = b;
    prev_d = d;
  }
  cuts.push_back(std::numeric_limits<double>::infinity());

  auto normal_mass = [&](double a, double b) {
    const double fb = std::isinf(b) ? 1.0 : special::normal_cdf(b / sd);
    return fb - special::normal_cdf(a / sd);
  };
  auto ide_mass = [&](double a, double b) {
    const double gb = std::isinf(b) ? 0.5 : 0.5 * std::exp(-lambda / b);
    const double ga = a == 0.0 ? 0.0 : 0.5 * std::exp(-lambda / a);
    return gb - ga;
  };
  double half = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double mid = std::isinf(b) ? 2.0 * a + scale : 0.5 * (a + b);
    // On each piece the smaller density contributes its mass.
    half += diff(mid) > 0.0 ? ide_mass(a, b) : normal_mass(a, b);
  }
  return 2.0 * half;
}

double select_lambda_apriori(const RegressionData& data, std::optional<double> overlap_bound) {
  const double bound = overlap_bound.value_or(1.0 / std::sqrt(static_cast<double>(data.p)));
  if (!(bound > 0.0 && bound < 1.0)) {
    throw ConfigError("select_lambda_apriori: overlap bound must lie in (0, 1)");
  }
  const NullReference ref = null_reference(data);
  if (!(ref.variance > 0.0)) throw NumericError("select_lambda_apriori: degenerate null variance");
  const double sd = std::sqrt(ref.variance);
  auto overlap_at = [&](double log_lambda) {
    return prior_null_overlap(std::exp(log_lambda), ref.variance);
  };

  // The overlap depends on lambda / sd only; locate its peak in that ratio.
  const double log_sd = std::log(sd);
  double best_t = -14.0;
  double best_v = -1.0;
  for (int k = 0; k <= 280; ++k) {
    const double t = -14.0 + 0.1 * k;
    const double v = overlap_at(log_sd + t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double a = best_t - 0.1;
  double b = best_t + 0.1;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  while (b - a > 1e-9) {
    const double c = b - golden * (b - a);
    const double d = a + golden * (b - a);
    if (overlap_at(log_sd + c) >= overlap_at(log_sd + d)) {
      b = d;
    } else {
      a = c;
    }
  }
  const double log_peak = log_sd + 0.5 * (a + b);
  const double peak = overlap_at(log_peak);
  if (peak <= bound) return std::exp(log_peak);

  double log_lo = log_peak;
  double lo_v = peak;
  while (lo_v > bound) {
    log_lo -= 1.0;
    if (log_lo < log_peak - 60.0) {
      std::ostringstream msg;
      msg << "select_lambda_apriori: bracket failure (overlap " << lo_v << " at lambda "
          << std::exp(log_lo) << ", peak " << peak << ", null variance " << ref.variance << ")";
      throw NumericError(msg.str());
    }
    lo_v = overlap_at(log_lo);
  }
  double log_hi = log_peak;
  double hi_v = peak;
  while (log_hi - log_lo > 1e-10) {
    const double mid = 0.5 * (log_lo + log_hi);
    const double v = overlap_at(mid);
    if (v < lo_v - 1e-12 || v > hi_v + 1e-12) {
      std::ostringstream msg;
      msg << "select_lambda_apriori: overlap not monotone on bracket (lambda " << std::exp(mid)
          << " gives " << v << ", bracket values " << lo_v << ", " << hi_v << ")";
      throw NumericError(msg.str());
    }
    if (v <= bound) {
      log_lo = mid;
      lo_v = v;
    } else {
      log_hi = mid;
      hi_v = v;
    }
  }
  return std::exp(log_lo);
}

double em_update_lambda(const MatrixXd& u_draws, Index p) {
  if (u_draws.rows() == 0 || u_draws.cols() != p) {
    throw NumericError("em_update_lambda: u draws empty or of wrong width");
  }
  if (!(u_draws.array() > 0.0).all()) throw NumericError("em_update_lambda: nonpositive u entry");
  const double total = u_draws.colwise().mean().sum();
  return 2.0 * static_cast<double>(p) / total;
}

double update_lambda_hyperprior(const VectorXd& beta, const HyperpriorParams& params, Rng& rng) {
  if (!(params.a > 0.0) || !(params.b > 0.0)) {
    throw ConfigError("hyperprior a and b must be positive");
  }
  double rate = params.b;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) == 0.0) {
      throw NumericError("update_lambda_hyperprior: beta[" + std::to_string(j) + "] is zero");
    }
    rate += 1.0 / std::abs(beta(j));
  }
  return rng.gamma(params.a + 2.0 * static_cast<double>(beta.size()), rate);
}

EmStep em_step(const RegressionData& data, const MCMCConfig& config, double lambda,
               int inner_iters, const std::optional<ChainState>& init) {
  MCMCConfig inner = config;
  inner.iterations = inner_iters;
  inner.burn_in = inner_iters / 10;
  inner.keep_u = true;
  PriorSpec prior;
  prior.lambda_mode = FixedLambda{lambda};
  const PosteriorDraws draws = run_chain(data, prior, inner, init);
  return {em_update_lambda(draws.u, data.p), draws.terminal};
}

McemResult run_mcem(const RegressionData& data, const MCMCConfig& config, double lambda_init,
                    int em_iters, int inner_iters) {
  if (!(lambda_init > 0.0) || em_iters < 1 || inner_iters < 10) {
    throw ConfigError("run_mcem: lambda_init, em_iters and inner_iters must be positive "
                      "(inner_iters >= 10)");
  }
  McemResult result;
  MCEMTrace& trace = result.trace;
  double lambda = lambda_init;
  trace.lambda_path.push_back(lambda);
  std::optional<ChainState> warm;
  for (int k = 1; k <= em_iters; ++k) {
    EmStep s = em_step(data, config, lambda, inner_iters, warm);
    if (!std::isfinite(s.lambda_next) || s.lambda_next > 1e6 || s.lambda_next < 1e-10) {
      throw NumericError("run_mcem: lambda diverged to " + std::to_string(s.lambda_next) +
                         " at EM iteration " + std::to_string(k) + " (pathological data?)");
    }
    trace.lambda_path.push_back(s.lambda_next);
    trace.iterations_used = k;
    const double rel = std::abs(s.lambda_next - lambda) / lambda;
    lambda = s.lambda_next;
    warm = std::move(s.terminal);
    if (rel < kEmTolerance) {
      trace.converged = true;
      break;
    }
  }
  PriorSpec prior;
  prior.lambda_mode = FixedLambda{lambda};
  result.draws = run_chain(data, prior, config);
  result.draws.prior.lambda_mode = McemLambda{lambda_init, em_iters, inner_iters};
  return result;
}

PosteriorDraws fit_posterior(const RegressionData& data, const PriorSpec& prior,
                             const MCMCConfig& config, MCEMTrace* trace) {
  prior.validate();
  if (const auto* em = std::get_if<McemLambda>(&prior.lambda_mode)) {
    if (!prior.is_ide()) {
      throw ConfigError("the Gibbs samplers support the IDE prior only (IGG with alpha = 1)");
    }
    McemResult r = run_mcem(data, config, em->lambda_init, em->em_iters, em->inner_iters);
    if (trace) *trace = r.trace;
    r.draws.prior = prior;
    return std::move(r.draws);
  }
  return run_chain(data, prior, config);
}

}  // namespace rlasso
