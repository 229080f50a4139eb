#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlasso/model.hpp"

namespace rlasso {

using Support = std::vector<Index>;  // sorted, 0-based

struct ModelSelection {
  Support support;
  VectorXd beta_penalized;  // inner-solver optimum, zeros off support
  VectorXd beta_refit;      // OLS on the support, zeros off support
  double objective = 0.0;   // penalized objective at beta_penalized
  double lambda_used = 0.0;
  // Best objective after each search iteration (S5 only).
  std::vector<double> best_trace;
};

struct S5Config {
  int iters_per_temperature = 30;
  std::vector<double> temperatures = default_temperatures();
  // Defaults to min(p, max(10, ceil(n/2))) when unset.
  std::optional<int> screening_size;
  std::uint64_t seed = 1;

  static std::vector<double> default_temperatures();
  void validate() const;
};

// RSS(beta) + lambda * sum over nonzero beta_j of 1/|beta_j|.
double rlasso_objective(const RegressionData& data, const VectorXd& beta, double lambda);

struct InnerSolution {
  VectorXd beta;  // length |support|
  double objective = 0.0;
  int newton_iterations = 0;
  bool used_fallback = false;
};

// Minimizes the penalized objective over the support's coefficients inside
// the sign orthant of the OLS solution. Damped Newton from OLS; golden
// section along the ray from OLS as fallback.
InnerSolution inner_solve(const RegressionData& data, const Support& support, double lambda);

// Global minimizer over every support of size < n (p <= max_p).
ModelSelection exhaustive_search(const RegressionData& data, double lambda, int max_p = 15);

// Off-support columns ranked by |x_j' r|, best first, truncated to `size`.
Support screen_candidates(const RegressionData& data, const Support& support,
                          const VectorXd& residual, int size);

ModelSelection s5_search(const RegressionData& data, double lambda, const S5Config& config);

// OLS restricted to the support; zeros elsewhere. Throws NumericError when the
// support columns are rank deficient.
VectorXd ols_refit(const RegressionData& data, const Support& support);

// Plugs the posterior median of lambda (or its point value) into the
// frequentist search; exhaustive when p <= 15.
ModelSelection fbp_select(const PosteriorDraws& draws, const RegressionData& data,
                          const S5Config& config);

// Same, with the lambda given directly.
ModelSelection select_at_lambda(const RegressionData& data, double lambda, const S5Config& config);

}  // namespace rlasso
