#include "rlasso/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlasso/error.hpp"

namespace rlasso {

RegressionData standardize(const VectorXd& raw_y, const MatrixXd& raw_X,
                           std::vector<std::string> names) {
  const Index n = raw_X.rows();
  const Index p = raw_X.cols();
  if (n < 2) throw DataError("standardize: need at least 2 rows");
  if (p < 1) throw DataError("standardize: need at least one predictor");
  if (raw_y.size() != n) {
    throw DataError("standardize: response length does not match design rows");
  }
  if (!names.empty() && static_cast<Index>(names.size()) != p) {
    throw DataError("standardize: column name count does not match design");
  }
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(raw_y(i))) {
      throw DataError("standardize: non-finite response at row " + std::to_string(i));
    }
    for (Index j = 0; j < p; ++j) {
      if (!std::isfinite(raw_X(i, j))) {
        throw DataError("standardize: non-finite entry at row " + std::to_string(i) +
                        ", column " + std::to_string(j));
      }
    }
  }

  RegressionData d;
  d.n = n;
  d.p = p;
  d.response_mean = raw_y.mean();
  d.y = raw_y.array() - d.response_mean;
  d.column_means = raw_X.colwise().mean().transpose();
  d.X = raw_X.rowwise() - d.column_means.transpose();
  d.column_scales.resize(p);
  for (Index j = 0; j < p; ++j) {
    const double sd = std::sqrt(d.X.col(j).squaredNorm() / static_cast<double>(n - 1));
    const double magnitude = std::max(1.0, raw_X.col(j).cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * magnitude)) {
      std::string label = names.empty() ? std::to_string(j) : names[j];
      throw DataError("standardize: constant column '" + label + "'");
    }
    d.column_scales(j) = sd;
    d.X.col(j) /= sd;
  }
  d.names = std::move(names);
  if (d.names.empty()) {
    for (Index j = 0; j < p; ++j) d.names.push_back("x" + std::to_string(j + 1));
  }
  return d;
}

MatrixXd RegressionData::transform(const MatrixXd& raw_X) const {
  if (raw_X.cols() != p) throw DataError("transform: column count mismatch");
  MatrixXd out = raw_X.rowwise() - column_means.transpose();
  for (Index j = 0; j < p; ++j) out.col(j) /= column_scales(j);
  return out;
}

VectorXd RegressionData::predict_raw(const MatrixXd& raw_X, const VectorXd& beta) const {
  return (transform(raw_X) * beta).array() + response_mean;
}

VectorXd RegressionData::to_raw_coefficients(const VectorXd& beta) const {
  return beta.cwiseQuotient(column_scales);
}

double RegressionData::raw_intercept(const VectorXd& beta) const {
  return response_mean - to_raw_coefficients(beta).dot(column_means);
}

// ---------------------------------------------------------------------------

bool PriorSpec::is_ide() const {
  if (std::holds_alternative<IdeFamily>(family)) return true;
  return std::get<IggFamily>(family).alpha == 1.0;
}

void PriorSpec::validate() const {
  if (const auto* igg = std::get_if<IggFamily>(&family)) {
    if (!(igg->alpha > 0.0)) throw ConfigError("IGG alpha must be positive");
  }
  std::visit(
      [](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, FixedLambda>) {
          if (!(mode.lambda > 0.0)) throw ConfigError("fixed lambda must be positive");
        } else if constexpr (std::is_same_v<T, McemLambda>) {
          if (!(mode.lambda_init > 0.0)) throw ConfigError("MCEM lambda_init must be positive");
          if (mode.em_iters < 1) throw ConfigError("MCEM em_iters must be positive");
          if (mode.inner_iters < 10) throw ConfigError("MCEM inner_iters must be at least 10");
        } else {
          if (!(mode.a > 0.0) || !(mode.b > 0.0)) {
            throw ConfigError("hyperprior a and b must be positive");
          }
        }
      },
      lambda_mode);
}

const char* to_string(SamplerKind kind) {
  return kind == SamplerKind::kSmdp ? "smdp" : "smtn";
}

SamplerKind sampler_from_string(const std::string& name) {
  if (name == "smdp") return SamplerKind::kSmdp;
  if (name == "smtn") return SamplerKind::kSmtn;
  throw ConfigError("unknown sampler '" + name + "' (expected smdp or smtn)");
}

void MCMCConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be positive");
  if (burn_in < 0) throw ConfigError("burn-in must be nonnegative");
  if (burn_in >= iterations) {
    throw ConfigError("burn-in (" + std::to_string(burn_in) + ") must be smaller than iterations (" +
                      std::to_string(iterations) + ")");
  }
  if (inner_mvn_sweeps < 1) throw ConfigError("inner_mvn_sweeps must be positive");
  if (fix_sigma2 && !(*fix_sigma2 > 0.0)) throw ConfigError("fixed sigma2 must be positive");
}

std::string check_state(const ChainState& s, SamplerKind kind) {
  std::ostringstream msg;
  const Index p = s.beta.size();
  if (!(s.sigma2 > 0.0)) return "sigma2 not positive";
  if (!(s.lambda > 0.0)) return "lambda not positive";
  if (s.u.size() != p) return "u has wrong length";
  const double sigma = std::sqrt(s.sigma2);
  for (Index j = 0; j < p; ++j) {
    const double b = std::abs(s.beta(j));
    if (b == 0.0) {
      msg << "beta[" << j << "] is exactly zero";
      return msg.str();
    }
    if (!(s.u(j) > 0.0)) {
      msg << "u[" << j << "] not positive";
      return msg.str();
    }
    const double bound = kind == SamplerKind::kSmdp ? 1.0 : sigma;
    if (!(b * s.u(j) > bound)) {
      msg << "support violated at " << j << ": |beta|*u = " << b * s.u(j) << " <= " << bound;
      return msg.str();
    }
  }
  if (kind == SamplerKind::kSmtn) {
    if (s.tau.size() != p || s.zeta.size() != p) return "tau/zeta missing";
    if ((s.tau.array() <= 0.0).any()) return "tau not positive";
    if ((s.zeta.array() <= 0.0).any()) return "zeta not positive";
    const double cap = (s.beta.array().square() * s.u.array().square()).minCoeff();
    if (!(s.sigma2 < cap)) return "sigma2 exceeds min(beta^2 u^2)";
  } else if (s.tau.size() != 0 || s.zeta.size() != 0) {
    return "SMDP state carries tau/zeta";
  }
  return {};
}

// ---------------------------------------------------------------------------

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw DataError("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double batch_means_se(const VectorXd& chain) {
  const Index kept = chain.size();
  const auto batches = static_cast<Index>(std::floor(std::sqrt(static_cast<double>(kept))));
  if (batches < 2) return 0.0;
  const Index size = kept / batches;
  VectorXd means(batches);
  for (Index b = 0; b < batches; ++b) means(b) = chain.segment(b * size, size).mean();
  const double centre = means.mean();
  const double var = (means.array() - centre).square().sum() / static_cast<double>(batches - 1);
  return std::sqrt(var / static_cast<double>(batches));
}

FitSummary summarize(const PosteriorDraws& draws, double level) {
  if (draws.kept() == 0 || draws.beta.cols() == 0) throw DataError("summarize: empty draws");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("summarize: level must lie in (0,1)");
  const Index p = draws.beta.cols();
  const double tail = (1.0 - level) / 2.0;
  FitSummary s;
  s.level = level;
  s.posterior_mean = draws.beta.colwise().mean().transpose();
  s.posterior_median.resize(p);
  s.ci_lower.resize(p);
  s.ci_upper.resize(p);
  s.mcse.resize(p);
  for (Index j = 0; j < p; ++j) {
    const VectorXd col = draws.beta.col(j);
    std::vector<double> v(col.data(), col.data() + col.size());
    s.posterior_median(j) = quantile(v, 0.5);
    s.ci_lower(j) = quantile(v, tail);
    s.ci_upper(j) = quantile(v, 1.0 - tail);
    s.mcse(j) = batch_means_se(col);
  }
  if (draws.lambda.size() > 0) {
    s.lambda_mean = draws.lambda.mean();
    s.lambda_median = median({draws.lambda.data(), draws.lambda.data() + draws.lambda.size()});
  } else if (draws.lambda_point) {
    s.lambda_mean = draws.lambda_point;
    s.lambda_median = draws.lambda_point;
  }
  return s;
}

}  // namespace rlasso
