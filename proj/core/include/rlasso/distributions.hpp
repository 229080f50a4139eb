#pragma once

#include <Eigen/Dense>

#include "rlasso/rng.hpp"

namespace rlasso {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Double Pareto (type I): density psi x_m^psi / (2 |b|^(psi+1)) on |b| >= x_m.
struct DoubleParetoParams {
  double x_m = 1.0;
  double psi = 1.0;
};

// Generalized double Pareto, location mu, scale xi, shape alpha:
// density (1/(2 xi)) (1 + (|b| - mu)/(alpha xi))^-(alpha+1) on |b| >= mu.
struct GdpParams {
  double mu = 0.0;
  double xi = 1.0;
  double alpha = 1.0;
};

// ---------------------------------------------------------------------------
// Densities

// Inverse double exponential: (lambda / (2 b^2)) exp(-lambda/|b|), zero at b = 0.
double ide_density(double beta, double lambda);
double ide_cdf(double beta, double lambda);
// Inverse generalized Gaussian; reduces to the IDE at alpha = 1.
double igg_density(double beta, double lambda, double alpha);
// Closed form via the regularized upper incomplete gamma function.
double igg_cdf(double beta, double lambda, double alpha);
double double_pareto_density(double beta, const DoubleParetoParams& params);
double gdp_density(double beta, const GdpParams& params);
// Inverse gamma with the given shape and scale.
double inverse_gamma_density(double x, double shape, double scale);

// ---------------------------------------------------------------------------
// Samplers

// Exact IDE draw: 1/|b| ~ Exponential(lambda) with a uniform sign.
double ide_sample(double lambda, Rng& rng);
// Exact IGG draw: |b|^-alpha ~ Gamma(1/alpha, rate lambda).
double igg_sample(double lambda, double alpha, Rng& rng);
double sample_double_pareto(const DoubleParetoParams& params, Rng& rng);
double sample_inverse_gamma(double shape, double scale, Rng& rng);
// lower + Exponential(rate).
double sample_exp_lower_truncated(double rate, double lower, Rng& rng);
// Michael-Schucany-Haas transformation with the acceptance step.
double sample_inverse_gaussian(double mu, double shape, Rng& rng);

// N(mu, sigma2) restricted to |x| > c. One of the two tails is chosen in
// proportion to its mass, then the draw is an inverse-CDF draw inside that
// tail, with all probabilities handled in log space. Throws NumericError when
// the combined tail mass falls below 1e-300.
double sample_mid_truncated_normal(double mu, double sigma2, double c, Rng& rng);

// Systematic-scan coordinate Gibbs for N(mean, precision^-1) restricted to
// |x_j| > thresholds_j for every j. `state` must already satisfy the
// constraints. Throws NumericError if the precision is not positive definite
// or a coordinate conditional is infeasible.
VectorXd sample_mid_truncated_mvn(const VectorXd& mean, const MatrixXd& precision,
                                  const VectorXd& thresholds, const VectorXd& state,
                                  int sweeps, Rng& rng);

// Same target written in canonical form: density proportional to
// exp(-x'Qx/2 + x'h). Skips the factorization check; Q must have a positive
// diagonal. Updates `state` in place.
void mid_truncated_mvn_sweep(const MatrixXd& precision, const VectorXd& linear,
                             const VectorXd& thresholds, VectorXd& state, int sweeps, Rng& rng);

// Inverse gamma(shape, scale) restricted to x < upper, via inversion of the
// gamma CDF of 1/x above 1/upper. upper may be +inf.
double sample_upper_truncated_inverse_gamma(double shape, double scale, double upper, Rng& rng);

}  // namespace rlasso
