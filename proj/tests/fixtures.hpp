#pragma once

#include "rlasso/evaluation.hpp"
#include "rlasso/model.hpp"
#include "rlasso/rng.hpp"

namespace fixture {

// Standardized synthetic regression: rows iid from the given structure,
// y = X beta0 + sigma * noise.
inline rlasso::RegressionData synthetic(rlasso::Index n, const rlasso::VectorXd& beta0,
                                        double sigma, std::uint64_t seed,
                                        rlasso::Structure s = rlasso::Structure::kIS,
                                        double rho = 0.0) {
  rlasso::Rng rng(seed);
  const rlasso::MatrixXd X = rlasso::generate_design(n, beta0.size(), s, rho, rng);
  const rlasso::VectorXd y = rlasso::generate_response(X, beta0, sigma, rng);
  return rlasso::standardize(y, X);
}

inline rlasso::VectorXd sparse_beta(rlasso::Index p, std::initializer_list<double> head) {
  rlasso::VectorXd b = rlasso::VectorXd::Zero(p);
  rlasso::Index j = 0;
  for (double v : head) b(j++) = v;
  return b;
}

}  // namespace fixture
