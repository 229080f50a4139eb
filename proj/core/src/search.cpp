#include "rlasso/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "rlasso/error.hpp"
#include "rlasso/rng.hpp"

namespace rlasso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MatrixXd columns(const MatrixXd& X, const Support& s) {
  MatrixXd out(X.rows(), static_cast<Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) out.col(static_cast<Index>(k)) = X.col(s[k]);
  return out;
}

VectorXd scatter(const Support& s, const VectorXd& sub, Index p) {
  VectorXd out = VectorXd::Zero(p);
  for (std::size_t k = 0; k < s.size(); ++k) out(s[k]) = sub(static_cast<Index>(k));
  return out;
}

double sub_objective(const MatrixXd& Xs, const VectorXd& y, const VectorXd& b, double lambda) {
  double pen = 0.0;
  for (Index j = 0; j < b.size(); ++j) pen += 1.0 / std::abs(b(j));
  return (y - Xs * b).squaredNorm() + lambda * pen;
}

bool same_orthant(const VectorXd& a, const VectorXd& b) {
  for (Index j = 0; j < a.size(); ++j) {
    if (b(j) == 0.0 || (a(j) > 0.0) != (b(j) > 0.0)) return false;
  }
  return true;
}

// Smaller objective wins; near-ties go to the smaller, then lexicographically
// first, support.
bool better(double f_a, const Support& a, double f_b, const Support& b) {
  const double tol = 1e-12 * std::max({1.0, std::abs(f_a), std::abs(f_b)});
  if (f_a < f_b - tol) return true;
  if (f_b < f_a - tol) return false;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

ModelSelection finish(const RegressionData& data, Support support, double lambda) {
  ModelSelection m;
  m.lambda_used = lambda;
  if (support.empty()) {
    m.beta_penalized = VectorXd::Zero(data.p);
    m.beta_refit = VectorXd::Zero(data.p);
    m.objective = data.y.squaredNorm();
  } else {
    const InnerSolution sol = inner_solve(data, support, lambda);
    m.beta_penalized = scatter(support, sol.beta, data.p);
    m.beta_refit = ols_refit(data, support);
    m.objective = sol.objective;
  }
  m.support = std::move(support);
  return m;
}

}  // namespace

std::vector<double> S5Config::default_temperatures() {
  std::vector<double> t(10);
  for (int k = 0; k < 10; ++k) t[k] = 3.0 * std::pow(0.1, k / 9.0);
  return t;
}

void S5Config::validate() const {
  if (iters_per_temperature < 1) throw ConfigError("S5: iters_per_temperature must be positive");
  if (temperatures.empty()) throw ConfigError("S5: temperature ladder is empty");
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (!(temperatures[k] > 0.0)) throw ConfigError("S5: temperatures must be positive");
    if (k > 0 && !(temperatures[k] < temperatures[k - 1])) {
      throw ConfigError("S5: temperatures must be strictly decreasing");
    }
  }
  if (screening_size && *screening_size < 1) throw ConfigError("S5: screening_size must be positive");
}

double rlasso_objective(const RegressionData& data, const VectorXd& beta, double lambda) {
  double pen = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) pen += 1.0 / std::abs(beta(j));
  }
  return (data.y - data.X * beta).squaredNorm() + lambda * pen;
}

VectorXd ols_refit(const RegressionData& data, const Support& support) {
  if (support.empty()) return VectorXd::Zero(data.p);
  if (static_cast<Index>(support.size()) > data.n) {
    throw NumericError("ols_refit: support larger than n");
  }
  const MatrixXd Xs = columns(data.X, support);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(Xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < Xs.cols()) throw NumericError("ols_refit: support columns are rank deficient");
  return scatter(support, qr.solve(data.y), data.p);
}

InnerSolution inner_solve(const RegressionData& data, const Support& support, double lambda) {
  if (support.empty()) throw ConfigError("inner_solve: empty support");
  if (!(lambda > 0.0)) throw ConfigError("inner_solve: lambda must be positive");
  const MatrixXd Xs = columns(data.X, support);
  const VectorXd ols = ols_refit(data, support);
  VectorXd start(static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double v = ols(support[k]);
    start(static_cast<Index>(k)) = v == 0.0 ? 1e-8 : v;
  }
  const MatrixXd gram = Xs.transpose() * Xs;
  const VectorXd xty = Xs.transpose() * data.y;
  const double gtol = 1e-8 * std::max(1.0, xty.norm());

  InnerSolution sol;
  VectorXd b = start;
  double f = sub_objective(Xs, data.y, b, lambda);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const VectorXd sgn = b.array().sign();
    const VectorXd grad =
        2.0 * (gram * b - xty) - lambda * (sgn.array() / b.array().square()).matrix();
    if (grad.norm() <= gtol) {
      converged = true;
      break;
    }
    MatrixXd hess = 2.0 * gram;
    hess.diagonal() += (2.0 * lambda / b.array().abs().cube()).matrix();
    const VectorXd dir = -hess.llt().solve(grad);
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const VectorXd trial = b + t * dir;
      if (!same_orthant(start, trial)) continue;
      const double ft = sub_objective(Xs, data.y, trial, lambda);
      if (ft <= f) {
        moved = ft < f || t * dir.norm() <= 1e-15 * b.norm();
        b = trial;
        f = ft;
        break;
      }
    }
    sol.newton_iterations = it + 1;
    if (!moved) {
      const VectorXd g2 =
          2.0 * (gram * b - xty) - lambda * (b.array().sign() / b.array().square()).matrix();
      converged = g2.norm() <= gtol * 1e3;
      break;
    }
  }
  if (!converged) {
    // Golden section on b(t) = ols * (1 + t), t in [0, 20].
    sol.used_fallback = true;
    auto line = [&](double t) { return sub_objective(Xs, data.y, start * (1.0 + t), lambda); };
    double lo = 0.0;
    double hi = 20.0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    while (hi - lo > 1e-12) {
      const double c = hi - g * (hi - lo);
      const double d = lo + g * (hi - lo);
      if (line(c) <= line(d)) {
        hi = d;
      } else {
        lo = c;
      }
    }
    const VectorXd cand = start * (1.0 + 0.5 * (lo + hi));
    const double fc = sub_objective(Xs, data.y, cand, lambda);
    if (fc < f) {
      b = cand;
      f = fc;
    }
    if (!std::isfinite(f)) throw NumericError("inner_solve: no finite minimizer found");
  }
  if (!same_orthant(start, b)) throw NumericError("inner_solve: left the OLS orthant");
  sol.beta = b;
  sol.objective = rlasso_objective(data, scatter(support, b, data.p), lambda);
  return sol;
}

ModelSelection exhaustive_search(const RegressionData& data, double lambda, int max_p) {
  if (data.p > max_p) {
    throw ConfigError("exhaustive_search: p = " + std::to_string(data.p) + " exceeds max_p = " +
                      std::to_string(max_p));
  }
  if (!(lambda > 0.0)) throw ConfigError("exhaustive_search: lambda must be positive");
  Support best;
  double best_f = data.y.squaredNorm();
  const std::uint64_t total = std::uint64_t{1} << data.p;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    Support s;
    for (Index j = 0; j < data.p; ++j) {
      if (mask & (std::uint64_t{1} << j)) s.push_back(j);
    }
    if (static_cast<Index>(s.size()) >= data.n) continue;
    double f;
    try {
      f = inner_solve(data, s, lambda).objective;
    } catch (const NumericError&) {
      continue;  // rank-deficient support
    }
    if (better(f, s, best_f, best)) {
      best_f = f;
      best = std::move(s);
    }
  }
  return finish(data, std::move(best), lambda);
}

Support screen_candidates(const RegressionData& data, const Support& support,
                          const VectorXd& residual, int size) {
  const VectorXd score = (data.X.transpose() * residual).cwiseAbs();
  Support pool;
  for (Index j = 0; j < data.p; ++j) {
    if (!std::binary_search(support.begin(), support.end(), j)) pool.push_back(j);
  }
  std::stable_sort(pool.begin(), pool.end(), [&](Index a, Index b) { return score(a) > score(b); });
  if (static_cast<int>(pool.size()) > size) pool.resize(static_cast<std::size_t>(size));
  return pool;
}

ModelSelection s5_search(const RegressionData& data, double lambda, const S5Config& config) {
  config.validate();
  if (!(lambda > 0.0)) throw ConfigError("s5_search: lambda must be positive");
  const int screen = config.screening_size.value_or(static_cast<int>(std::min<Index>(
      data.p, std::max<Index>(10, (data.n + 1) / 2))));

  struct Entry {
    double objective;
    VectorXd residual;
  };
  std::map<Support, Entry> cache;
  auto evaluate = [&](const Support& s) -> const Entry& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    Entry e{kInf, data.y};
    if (!s.empty()) {
      try {
        const InnerSolution sol = inner_solve(data, s, lambda);
        e.objective = sol.objective;
        e.residual = data.y - data.X * scatter(s, sol.beta, data.p);
      } catch (const NumericError&) {
        // rank-deficient supports stay at +inf
      }
    } else {
      e.objective = data.y.squaredNorm();
    }
    return cache.emplace(s, std::move(e)).first->second;
  };

  Rng rng(config.seed);
  Support current;
  Support best;
  double best_f = evaluate(current).objective;
  ModelSelection out;
  for (const double temp : config.temperatures) {
    for (int it = 0; it < config.iters_per_temperature; ++it) {
      const Entry& here = evaluate(current);
      std::vector<Support> neighbours;
      if (static_cast<Index>(current.size()) + 1 < data.n) {
        for (const Index j : screen_candidates(data, current, here.residual, screen)) {
          Support s = current;
          s.insert(std::lower_bound(s.begin(), s.end(), j), j);
          neighbours.push_back(std::move(s));
        }
      }
      for (std::size_t k = 0; k < current.size(); ++k) {
        Support s = current;
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(k));
        neighbours.push_back(std::move(s));
      }
      if (neighbours.empty()) {
        out.best_trace.push_back(best_f);
        continue;
      }
      std::vector<double> f(neighbours.size());
      double f_min = kInf;
      for (std::size_t k = 0; k < neighbours.size(); ++k) {
        f[k] = evaluate(neighbours[k]).objective;
        if (better(f[k], neighbours[k], best_f, best)) {
          best_f = f[k];
          best = neighbours[k];
        }
        f_min = std::min(f_min, f[k]);
      }
      if (std::isfinite(f_min)) {
        std::vector<double> w(f.size());
        double total = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
          w[k] = std::isfinite(f[k]) ? std::exp(-(f[k] - f_min) / temp) : 0.0;
          total += w[k];
        }
        double pick = rng.uniform() * total;
        std::size_t chosen = 0;
        for (; chosen + 1 < w.size(); ++chosen) {
          if (pick < w[chosen]) break;
          pick -= w[chosen];
        }
        while (w[chosen] == 0.0) chosen = (chosen + 1) % w.size();
        current = neighbours[chosen];
      }
      out.best_trace.push_back(best_f);
    }
  }
  ModelSelection result = finish(data, std::move(best), lambda);
  result.best_trace = std::move(out.best_trace);
  return result;
}

ModelSelection select_at_lambda(const RegressionData& data, double lambda, const S5Config& config) {
  if (data.p <= 15) return exhaustive_search(data, lambda);
  return s5_search(data, lambda, config);
}

ModelSelection fbp_select(const PosteriorDraws& draws, const RegressionData& data,
                          const S5Config& config) {
  double lambda;
  if (draws.lambda.size() > 0) {
    lambda = median({draws.lambda.data(), draws.lambda.data() + draws.lambda.size()});
  } else if (draws.lambda_point) {
    lambda = *draws.lambda_point;
  } else {
    throw ConfigError("fbp_select: draws carry no lambda information");
  }
  return select_at_lambda(data, lambda, config);
}

}  // namespace rlasso
