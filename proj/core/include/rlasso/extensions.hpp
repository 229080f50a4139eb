#pragma once

#include <variant>
#include <vector>

#include "rlasso/model.hpp"

namespace rlasso {

// RSS(beta) + sum over nonzero beta_j of lambdas_j / |beta_j|.
double rlasso_adaptive_objective(const RegressionData& data, const VectorXd& beta,
                                 const VectorXd& lambdas);

// RSS(beta) + lambda * sum over nonzero beta_j of 1 / |beta_j|^alpha.
double rbridge_objective(const RegressionData& data, const VectorXd& beta, double lambda,
                         double alpha);

// Max abs deviation between the IGG density and its double Pareto /
// inverse gamma mixture, evaluated by quadrature over a beta grid spanning
// [-50, -1e-3] U [1e-3, 50].
double rbridge_mixing_check(double lambda, double alpha);

// Quadratic surrogate of a general negative log-likelihood around its
// minimizer. info = C'C; the pseudo data (X = C, y = C beta_tilde) reproduce
// 0.5 (b - beta_tilde)' info (b - beta_tilde) as 0.5 ||y - X b||^2. Samplers
// run on the pseudo data should keep sigma2 fixed at 1.
struct LsaSurrogate {
  VectorXd beta_tilde;
  MatrixXd info;
  RegressionData pseudo_data;
};

LsaSurrogate lsa_build(const VectorXd& beta_tilde, const MatrixXd& info);

// Monotone shrinkage densities that can be reciprocalized through the
// inverse-uniform mixture.
struct StudentTFamily {
  double v = 3.0;
  double lambda = 1.0;
};
struct GdpFamily {
  double tau = 1.0;
  double alpha = 2.0;
};
struct HorseshoeLikeFamily {
  double tau = 1.0;
};
struct LaplaceFamily {
  double lambda = 1.0;
};
using ReciprocalFamily = std::variant<StudentTFamily, GdpFamily, HorseshoeLikeFamily, LaplaceFamily>;

// Unnormalized base density pi(beta) and mixing density h(t) = -2 t pi'(t).
double reciprocal_base_density(const ReciprocalFamily& family, double beta);
double reciprocal_mixing_density(const ReciprocalFamily& family, double t);
// Upper truncation of the mixing density used by the check (infinite unless
// the family needs one).
double reciprocal_truncation(const ReciprocalFamily& family);

// Normalized mixture side, integral of the inverse-uniform kernel
// 1/(2 t theta^2) on |theta| > 1/t against the normalized h.
double reciprocal_mixture_density(const ReciprocalFamily& family, double theta);
// Normalized direct side, C pi(1/theta) / theta^2.
double reciprocalized_density(const ReciprocalFamily& family, double theta);

// Max abs difference of the two normalized sides over a theta grid in
// [-100, -0.01] U [0.01, 100]. For the Laplace family the mixture side is
// compared against ide_density instead.
double reciprocal_mixture_check(const ReciprocalFamily& family);

struct BartlettFejerConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double weight1 = 0.0;  // (1 + alpha) / 2
  double weight2 = 0.0;  // (1 - alpha) / 2
};
// Normalizing constants of the two gamma components, found by quadrature.
BartlettFejerConstants bartlett_fejer_constants(double alpha);
// Mixture of inverse Bartlett-Fejer kernels against p(w | alpha).
double bartlett_fejer_density(double beta, double lambda, double alpha);
// Max abs deviation from igg_density over the beta grid of
// rbridge_mixing_check. Requires alpha in (0, 1].
double bartlett_fejer_check(double lambda, double alpha);

// Log-spaced symmetric grid: `per_side` points on [lo, hi] and their negatives.
std::vector<double> symmetric_log_grid(double lo, double hi, int per_side);

}  // namespace rlasso
