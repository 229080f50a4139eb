#pragma once

#include <functional>
#include <optional>

#include "rlasso/model.hpp"
#include "rlasso/rng.hpp"

namespace rlasso {

// Sufficient statistics shared by both Gibbs kernels.
struct GramCache {
  explicit GramCache(const RegressionData& data);

  MatrixXd xtx;
  VectorXd xty;
  double yty = 0.0;
  Index n = 0;
  Index p = 0;
};

struct StepOptions {
  int mvn_sweeps = 1;
  std::optional<double> fix_sigma2;
};

// Gibbs kernel built on the double Pareto mixture. Requires n > p so that
// X'X is invertible; the factorization is done once at construction.
class SmdpKernel {
 public:
  explicit SmdpKernel(const RegressionData& data);

  // (1) u | beta, (2) sigma2 | beta, (3) beta | u, sigma2.
  ChainState step(const ChainState& state, Rng& rng, const StepOptions& opts) const;

  const VectorXd& beta_mle() const { return beta_mle_; }

 private:
  GramCache gram_;
  VectorXd beta_mle_;
};

// Gibbs kernel built on the truncated normal mixture. Works for p >= n since
// X'X + T^-1 is positive definite whenever every tau_j > 0.
class SmtnKernel {
 public:
  explicit SmtnKernel(const RegressionData& data);

  // (1) u, (2) zeta, (3) 1/tau, (4) sigma2 (truncated), (5) beta.
  ChainState step(const ChainState& state, Rng& rng, const StepOptions& opts) const;

 private:
  GramCache gram_;
};

ChainState smdp_step(const ChainState& state, const SmdpKernel& kernel, Rng& rng,
                     const StepOptions& opts = {});
ChainState smtn_step(const ChainState& state, const SmtnKernel& kernel, Rng& rng,
                     const StepOptions& opts = {});

// Ridge start (X'X + I)^-1 X'y with zero entries nudged to 1e-3, latent
// scales placed strictly inside their supports, sigma2 = RSS / n.
ChainState initial_state(const RegressionData& data, SamplerKind kind, double lambda,
                         std::optional<double> fix_sigma2 = std::nullopt);

// Called after every completed iteration with the 1-based iteration index.
using IterationObserver = std::function<void(int, const ChainState&)>;

// Runs one chain for Fixed or Hyperprior lambda modes. MCEM is driven by
// run_mcem. `init` enables warm starts; the terminal state is returned in
// the draws.
PosteriorDraws run_chain(const RegressionData& data, const PriorSpec& prior,
                         const MCMCConfig& config,
                         const std::optional<ChainState>& init = std::nullopt,
                         const IterationObserver& observer = {});

// Initial-positive-sequence ESS. Returns 0 for a constant chain. Throws
// ConfigError for fewer than 100 draws.
double effective_sample_size(const VectorXd& draws);

}  // namespace rlasso
