#pragma once

#include <optional>
#include <vector>

#include "rlasso/model.hpp"
#include "rlasso/rng.hpp"

namespace rlasso {

struct HyperpriorParams {
  double a = 0.001;
  double b = 0.001;
};

struct MCEMTrace {
  std::vector<double> lambda_path;
  bool converged = false;
  int iterations_used = 0;
};

// Relative change below which the EM iteration is declared converged.
inline constexpr double kEmTolerance = 1e-3;

// Null reference law used by the apriori selector: N(0, variance), where
// variance = sigma2_hat * mean(diag((X'X)^-1)) (ridge-regularized when n <= p).
struct NullReference {
  double sigma2_hat = 0.0;
  double variance = 0.0;
};
NullReference null_reference(const RegressionData& data);

// Overlap mass  int min(N(b; 0, variance), IDE(b; lambda)) db, evaluated
// piecewise between the density crossing points with closed-form CDFs.
double prior_null_overlap(double lambda, double null_variance);

// BayesA: largest lambda on the increasing branch of the overlap curve whose
// overlap does not exceed `overlap_bound` (default 1/sqrt(p)).
double select_lambda_apriori(const RegressionData& data,
                             std::optional<double> overlap_bound = std::nullopt);

// BayesB M-step: 2p / sum_j mean(u_j).
double em_update_lambda(const MatrixXd& u_draws, Index p);

// BayesC: one draw from Gamma(a + 2p, b + sum 1/|beta_j|).
double update_lambda_hyperprior(const VectorXd& beta, const HyperpriorParams& params, Rng& rng);

struct McemResult {
  MCEMTrace trace;
  PosteriorDraws draws;
};

// One EM step: an inner chain of `inner_iters` at fixed lambda (a tenth
// discarded as warm-up), followed by the closed-form update. The inner chain
// always uses `config.seed`, so successive steps share random numbers.
struct EmStep {
  double lambda_next = 0.0;
  ChainState terminal;
};
EmStep em_step(const RegressionData& data, const MCMCConfig& config, double lambda,
               int inner_iters, const std::optional<ChainState>& init);

// BayesB driver. Inner chains warm-start from the previous terminal state;
// the final draws come from a fresh full-length chain at the terminal lambda.
McemResult run_mcem(const RegressionData& data, const MCMCConfig& config, double lambda_init,
                    int em_iters, int inner_iters);

// Dispatches on the lambda mode (Fixed, Hyperprior, MCEM).
PosteriorDraws fit_posterior(const RegressionData& data, const PriorSpec& prior,
                             const MCMCConfig& config, MCEMTrace* trace = nullptr);

}  // namespace rlasso
