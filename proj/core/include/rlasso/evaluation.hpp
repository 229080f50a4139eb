#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlasso/hyperparam.hpp"
#include "rlasso/model.hpp"
#include "rlasso/rng.hpp"
#include "rlasso/search.hpp"

namespace rlasso {

enum class Structure { kIS, kCS, kAR };
const char* to_string(Structure s);

struct ScenarioSpec {
  std::string id;
  Index n = 0;
  Index p = 0;
  Structure structure = Structure::kIS;
  double rho = 0.0;
  double sigma = 1.0;
  VectorXd beta0;
  double train_fraction = 0.5;

  void validate() const;
};

// The 24 benchmark configurations, "I" through "XXIV".
ScenarioSpec scenario(const std::string& id);
std::vector<std::string> scenario_ids();

MatrixXd design_covariance(Index p, Structure structure, double rho);
// Rows iid N(0, Sigma) through the Cholesky factor of Sigma.
MatrixXd generate_design(Index n, Index p, Structure structure, double rho, Rng& rng);
VectorXd generate_response(const MatrixXd& X, const VectorXd& beta0, double sigma, Rng& rng);

// 0.5 (TP/(TP+FN) + TN/(TN+FP)); empty when either denominator is zero.
std::optional<double> balanced_accuracy(const Support& selected, const Support& truth, Index p);

enum class Method { kBayesA, kBayesB, kBayesC, kRLasso, kOls };
const char* to_string(Method m);
Method method_from_string(const std::string& name);

struct MethodConfig {
  int iterations = 11000;
  int burn_in = 1000;
  HyperpriorParams hyperprior;
  McemLambda mcem;
  S5Config s5;
};

struct MethodFit {
  VectorXd beta;  // standardized-scale coefficients used for prediction
  Support selected;
  double lambda = 0.0;
};

// Bayesian methods predict with the SMTN posterior mean and select through
// FBP; rLASSO predicts with the OLS refit of the searched support at the
// apriori lambda; OLS uses every predictor.
MethodFit fit_method(const RegressionData& data, Method method, const MethodConfig& config,
                     std::uint64_t seed);

struct CvResult {
  double mspe = 0.0;
  double model_size = 0.0;
  std::vector<double> fold_mse;  // repeat-major
  std::vector<int> fold_sizes;
};

// Random near-equal partition of {0..n-1} into k folds.
std::vector<std::vector<Index>> kfold_partition(Index n, int k, Rng& rng);

CvResult kfold_cv(const VectorXd& raw_y, const MatrixXd& raw_X, int k, int repeats, Method method,
                  const MethodConfig& config, std::uint64_t seed, int threads = 1);

struct ReplicateRecord {
  int replicate = 0;
  Method method = Method::kBayesC;
  double mse = 0.0;
  std::optional<double> bar;
  Index model_size = 0;
};

struct MethodSummary {
  Method method = Method::kBayesC;
  double median_mse = 0.0;
  std::optional<double> median_bar;
  double median_model_size = 0.0;
  int completed = 0;
  int failed = 0;
};

struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<ReplicateRecord> records;  // replicate-major, methods in request order
  std::vector<MethodSummary> summaries;
  std::vector<std::string> failures;
};

// Per replicate: fresh data, train/test split, each method fitted on the
// standardized training part, MSE on the test part, BAR against beta0.
ScenarioResult run_scenario(const ScenarioSpec& spec, int replications,
                            const std::vector<Method>& methods, const MethodConfig& config,
                            std::uint64_t master_seed, int threads = 1);

}  // namespace rlasso
