#include "rlasso/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rlasso/error.hpp"
#include "rlasso/special.hpp"

namespace rlasso {

namespace {

constexpr double kLogMinMass = -690.7755278982137;  // log(1e-300)

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw NumericError(std::string(what) + " must be positive");
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

// ---------------------------------------------------------------------------
// Densities

double ide_density(double beta, double lambda) {
  require_positive(lambda, "ide_density: lambda");
  if (beta == 0.0) return 0.0;
  const double a = std::abs(beta);
  return lambda / (2.0 * a * a) * std::exp(-lambda / a);
}

double ide_cdf(double beta, double lambda) {
  require_positive(lambda, "ide_cdf: lambda");
  if (beta == 0.0) return 0.5;
  // P(|b| < t) = exp(-lambda / t)
  const double inner = std::exp(-lambda / std::abs(beta));
  return beta < 0.0 ? 0.5 * (1.0 - inner) : 0.5 * (1.0 + inner);
}

double igg_density(double beta, double lambda, double alpha) {
  require_positive(lambda, "igg_density: lambda");
  require_positive(alpha, "igg_density: alpha");
  if (beta == 0.0) return 0.0;
  const double a = std::abs(beta);
  const double log_norm = std::log(lambda) / alpha - std::log(2.0) - 2.0 * std::log(a) -
                          special::lgamma(1.0 / alpha + 1.0);
  return std::exp(log_norm - lambda / std::pow(a, alpha));
}

double igg_cdf(double beta, double lambda, double alpha) {
  require_positive(lambda, "igg_cdf: lambda");
  require_positive(alpha, "igg_cdf: alpha");
  if (beta == 0.0) return 0.5;
  // P(|b| < t) = Q(1/alpha, lambda / t^alpha)
  const double inner = special::gamma_q(1.0 / alpha, lambda / std::pow(std::abs(beta), alpha));
  return beta < 0.0 ? 0.5 * (1.0 - inner) : 0.5 * (1.0 + inner);
}

double double_pareto_density(double beta, const DoubleParetoParams& prm) {
  require_positive(prm.x_m, "double Pareto x_m");
  require_positive(prm.psi, "double Pareto psi");
  const double a = std::abs(beta);
  if (a < prm.x_m) return 0.0;
  return prm.psi * std::pow(prm.x_m, prm.psi) / (2.0 * std::pow(a, prm.psi + 1.0));
}

double gdp_density(double beta, const GdpParams& prm) {
  require_positive(prm.xi, "GDP xi");
  require_positive(prm.alpha, "GDP alpha");
  const double a = std::abs(beta);
  if (a < prm.mu) return 0.0;
  return std::pow(1.0 + (a - prm.mu) / (prm.alpha * prm.xi), -(prm.alpha + 1.0)) / (2.0 * prm.xi);
}

double inverse_gamma_density(double x, double shape, double scale) {
  if (x <= 0.0) return 0.0;
  return std::exp(shape * std::log(scale) - special::lgamma(shape) - (shape + 1.0) * std::log(x) -
                  scale / x);
}

// ---------------------------------------------------------------------------
// Samplers

double ide_sample(double lambda, Rng& rng) {
  require_positive(lambda, "ide_sample: lambda");
  const double s = rng.sign();
  return s / rng.exponential(lambda);
}

double igg_sample(double lambda, double alpha, Rng& rng) {
  require_positive(lambda, "igg_sample: lambda");
  require_positive(alpha, "igg_sample: alpha");
  const double s = rng.sign();
  const double g = rng.gamma(1.0 / alpha, lambda);
  return s * std::pow(g, -1.0 / alpha);
}

double sample_double_pareto(const DoubleParetoParams& prm, Rng& rng) {
  require_positive(prm.x_m, "double Pareto x_m");
  require_positive(prm.psi, "double Pareto psi");
  const double s = rng.sign();
  return s * prm.x_m * std::pow(rng.uniform(), -1.0 / prm.psi);
}

double sample_inverse_gamma(double shape, double scale, Rng& rng) {
  require_positive(shape, "inverse gamma shape");
  require_positive(scale, "inverse gamma scale");
  return 1.0 / rng.gamma(shape, scale);
}

double sample_exp_lower_truncated(double rate, double lower, Rng& rng) {
  require_positive(rate, "truncated exponential rate");
  if (!(lower >= 0.0)) throw NumericError("truncated exponential: lower bound must be >= 0");
  double x = lower + rng.exponential(rate);
  if (!(x > lower)) x = std::nextafter(lower, std::numeric_limits<double>::infinity());
  return x;
}

double sample_inverse_gaussian(double mu, double shape, Rng& rng) {
  require_positive(mu, "inverse Gaussian mean");
  require_positive(shape, "inverse Gaussian shape");
  const double nu = rng.normal();
  const double w = mu * nu * nu / (2.0 * shape);
  // mu (1 + w - sqrt(w^2 + 2w)) rewritten without cancellation.
  const double x = mu / (1.0 + w + std::sqrt(w * (w + 2.0)));
  if (rng.uniform() <= mu / (mu + x)) return x;
  return mu * (mu / x);
}

double sample_mid_truncated_normal(double mu, double sigma2, double c, Rng& rng) {
  require_positive(sigma2, "mid-truncated normal variance");
  if (!(c >= 0.0)) throw NumericError("mid-truncated normal: threshold must be >= 0");
  const double sd = std::sqrt(sigma2);
  const double log_lower = special::log_normal_cdf((-c - mu) / sd);
  const double log_upper = special::log_normal_cdf((mu - c) / sd);
  const double log_total = log_add(log_lower, log_upper);
  if (!(log_total >= kLogMinMass)) {
    throw NumericError("mid-truncated normal: truncation region unreachable (mu=" +
                       std::to_string(mu) + ", sd=" + std::to_string(sd) +
                       ", c=" + std::to_string(c) + ")");
  }
  const double log_v = std::log(rng.uniform());
  const bool lower = std::log(rng.uniform()) < log_lower - log_total;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (lower) {
    double x = mu + sd * special::normal_quantile_from_log(log_v + log_lower);
    if (!(x < -c)) x = std::nextafter(-c, -kInf);
    return x;
  }
  double x = mu - sd * special::normal_quantile_from_log(log_v + log_upper);
  if (!(x > c)) x = std::nextafter(c, kInf);
  return x;
}

void mid_truncated_mvn_sweep(const MatrixXd& precision, const VectorXd& linear,
                             const VectorXd& thresholds, VectorXd& state, int sweeps, Rng& rng) {
  const Eigen::Index p = state.size();
  for (int s = 0; s < sweeps; ++s) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double qjj = precision(j, j);
      if (!(qjj > 0.0)) {
        throw NumericError("mid-truncated MVN: non-positive precision diagonal at coordinate " +
                           std::to_string(j));
      }
      const double off = precision.col(j).dot(state) - qjj * state(j);
      const double cond_mean = (linear(j) - off) / qjj;
      try {
        state(j) = sample_mid_truncated_normal(cond_mean, 1.0 / qjj, thresholds(j), rng);
      } catch (const NumericError& e) {
        throw NumericError("mid-truncated MVN: coordinate " + std::to_string(j) + ": " + e.what());
      }
    }
  }
}

VectorXd sample_mid_truncated_mvn(const VectorXd& mean, const MatrixXd& precision,
                                  const VectorXd& thresholds, const VectorXd& state, int sweeps,
                                  Rng& rng) {
  const Eigen::Index p = mean.size();
  if (precision.rows() != p || precision.cols() != p || thresholds.size() != p ||
      state.size() != p) {
    throw NumericError("mid-truncated MVN: dimension mismatch");
  }
  if (sweeps < 1) throw NumericError("mid-truncated MVN: sweeps must be positive");
  if (!precision.isApprox(precision.transpose(), 1e-10)) {
    throw NumericError("mid-truncated MVN: precision matrix not symmetric");
  }
  Eigen::LLT<MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericError("mid-truncated MVN: matrix not positive definite");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(thresholds(j) >= 0.0)) throw NumericError("mid-truncated MVN: negative threshold");
    if (!(std::abs(state(j)) > thresholds(j))) {
      throw NumericError("mid-truncated MVN: initial state violates threshold at coordinate " +
                         std::to_string(j));
    }
  }
  VectorXd x = state;
  mid_truncated_mvn_sweep(precision, precision * mean, thresholds, x, sweeps, rng);
  return x;
}

double sample_upper_truncated_inverse_gamma(double shape, double scale, double upper, Rng& rng) {
  require_positive(shape, "truncated inverse gamma shape");
  require_positive(scale, "truncated inverse gamma scale");
  require_positive(upper, "truncated inverse gamma upper bound");
  // 1/x ~ Gamma(shape, rate = scale) restricted to 1/x > 1/upper, i.e.
  // scale/x ~ Gamma(shape, 1) restricted above scale/upper.
  const double cut = std::isinf(upper) ? 0.0 : scale / upper;
  const double mass = special::gamma_q(shape, cut);
  if (!(mass >= 1e-300)) {
    throw NumericError("truncated inverse gamma: mass below bound underflows (shape=" +
                       std::to_string(shape) + ", scale=" + std::to_string(scale) +
                       ", upper=" + std::to_string(upper) + ")");
  }
  const double g = special::gamma_q_inv(shape, rng.uniform() * mass);
  double x = scale / g;
  if (!(x < upper)) x = std::nextafter(upper, 0.0);
  return x;
}

}  // namespace rlasso
