#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace rlasso {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Centered response and column-standardized design. The moments used for
// standardization are kept so coefficients can be mapped back to the raw
// scale and so held-out rows can be transformed without leakage.
struct RegressionData {
  VectorXd y;
  MatrixXd X;
  Index n = 0;
  Index p = 0;
  VectorXd column_means;
  VectorXd column_scales;
  double response_mean = 0.0;
  std::vector<std::string> names;

  // Applies the stored training moments to new raw rows.
  MatrixXd transform(const MatrixXd& raw_X) const;
  // Predictions on the raw response scale for standardized coefficients.
  VectorXd predict_raw(const MatrixXd& raw_X, const VectorXd& beta) const;
  VectorXd to_raw_coefficients(const VectorXd& beta) const;
  double raw_intercept(const VectorXd& beta) const;
};

// Centers y, centers and scales every column of X to unit sample standard
// deviation (divisor n - 1). Throws DataError on constant columns or
// non-finite entries.
RegressionData standardize(const VectorXd& raw_y, const MatrixXd& raw_X,
                           std::vector<std::string> names = {});

// ---------------------------------------------------------------------------
// Prior specification

struct IdeFamily {};
struct IggFamily {
  double alpha = 1.0;
};
using PenaltyFamily = std::variant<IdeFamily, IggFamily>;

struct FixedLambda {
  double lambda = 1.0;
};
struct McemLambda {
  double lambda_init = 1.0;
  int em_iters = 20;
  int inner_iters = 1000;
};
struct HyperpriorLambda {
  double a = 0.001;
  double b = 0.001;
};
using LambdaMode = std::variant<FixedLambda, McemLambda, HyperpriorLambda>;

struct PriorSpec {
  PenaltyFamily family = IdeFamily{};
  LambdaMode lambda_mode = HyperpriorLambda{};

  // IGG with alpha == 1 collapses to IDE.
  bool is_ide() const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Chain configuration and state

enum class SamplerKind { kSmdp, kSmtn };

const char* to_string(SamplerKind kind);
SamplerKind sampler_from_string(const std::string& name);

struct MCMCConfig {
  SamplerKind sampler = SamplerKind::kSmtn;
  int iterations = 11000;
  int burn_in = 1000;
  std::uint64_t seed = 1;
  int inner_mvn_sweeps = 1;
  std::optional<double> fix_sigma2;
  // Store latent u draws (needed by the EM update).
  bool keep_u = false;

  int kept() const { return iterations - burn_in; }
  void validate() const;
};

struct ChainState {
  VectorXd beta;
  VectorXd u;
  VectorXd tau;   // SMTN only
  VectorXd zeta;  // SMTN only
  double sigma2 = 1.0;
  double lambda = 1.0;
};

// Checks the support constraints of the given sampler; returns an empty
// string when all hold, otherwise a description of the first violation.
std::string check_state(const ChainState& state, SamplerKind kind);

struct PosteriorDraws {
  MatrixXd beta;         // kept x p
  VectorXd sigma2;       // kept
  VectorXd lambda;       // kept, empty unless lambda was sampled
  MatrixXd u;            // kept x p when requested
  std::optional<double> lambda_point;  // fixed / EM value
  MCMCConfig config;
  PriorSpec prior;
  ChainState terminal;

  Index kept() const { return beta.rows(); }
};

struct FitSummary {
  VectorXd posterior_mean;
  VectorXd posterior_median;
  VectorXd ci_lower;
  VectorXd ci_upper;
  VectorXd mcse;
  double level = 0.95;
  std::optional<double> lambda_mean;
  std::optional<double> lambda_median;
};

// Equal-tailed intervals use linear interpolation between order statistics;
// MCSE is the batch-means estimate with floor(sqrt(kept)) batches.
FitSummary summarize(const PosteriorDraws& draws, double level = 0.95);

// Linear-interpolation quantile of an unsorted sample (R type 7).
double quantile(std::vector<double> values, double prob);
double median(std::vector<double> values);
double batch_means_se(const VectorXd& chain);

}  // namespace rlasso
