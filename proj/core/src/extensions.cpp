#include "rlasso/extensions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rlasso/distributions.hpp"
#include "rlasso/error.hpp"
#include "rlasso/special.hpp"

namespace rlasso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of f(t) over t in [a, b], 0 <= a < b <= inf, computed in s = log t.
// Open ends are clamped to |s| <= 80 and the range is cut into unit pieces so
// that narrow peaks are not stepped over by the adaptive rule.
template <class F>
double log_integrate(F f, double a, double b, const char* what) {
  auto g = [&](double s) {
    const double t = std::exp(s);
    if (t == 0.0 || std::isinf(t)) return 0.0;
    const double v = f(t) * t;
    return std::isfinite(v) ? v : 0.0;
  };
  constexpr double kClamp = 80.0;
  const double lo = a > 0.0 ? std::log(a) : std::min(-kClamp, std::log(b) - 1.0);
  const double hi = std::isinf(b) ? std::max(kClamp, lo + 1.0) : std::log(b);
  if (!(hi > lo)) return 0.0;
  const int pieces = static_cast<int>(std::ceil(hi - lo));
  const double width = (hi - lo) / pieces;
  double total = 0.0, err_total = 0.0, l1_total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double s0 = lo + width * k;
    const double s1 = k + 1 == pieces ? hi : s0 + width;
    double err = 0.0, l1 = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, s0, s1, 8, 1e-12,
                                                                           &err, &l1);
    err_total += err;
    l1_total += l1;
  }
  if (!std::isfinite(total) || err_total > 1e-9 * l1_total + 1e-15) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (estimate " << total << ", error " << err_total
        << ")";
    throw NumericError(msg.str());
  }
  return total;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
}

double rss(const RegressionData& data, const VectorXd& beta) {
  return (data.y - data.X * beta).squaredNorm();
}

void validate_family(const ReciprocalFamily& family) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StudentTFamily>) {
          require_positive(f.v, "Student t degrees of freedom");
          require_positive(f.lambda, "Student t scale");
        } else if constexpr (std::is_same_v<T, GdpFamily>) {
          require_positive(f.tau, "GDP tau");
          require_positive(f.alpha, "GDP alpha");
        } else if constexpr (std::is_same_v<T, HorseshoeLikeFamily>) {
          require_positive(f.tau, "horseshoe-like tau");
        } else {
          require_positive(f.lambda, "Laplace rate");
        }
      },
      family);
}

}  // namespace

std::vector<double> symmetric_log_grid(double lo, double hi, int per_side) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * per_side));
  const double step = std::log(hi / lo) / (per_side - 1);
  for (int k = per_side - 1; k >= 0; --k) grid.push_back(-lo * std::exp(step * k));
  for (int k = 0; k < per_side; ++k) grid.push_back(lo * std::exp(step * k));
  return grid;
}

double rlasso_adaptive_objective(const RegressionData& data, const VectorXd& beta,
                                 const VectorXd& lambdas) {
  if (lambdas.size() != beta.size()) throw ConfigError("adaptive objective: lambda length mismatch");
  if (!(lambdas.array() > 0.0).all()) throw ConfigError("adaptive objective: lambdas must be positive");
  double pen = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) pen += lambdas(j) / std::abs(beta(j));
  }
  return rss(data, beta) + pen;
}

double rbridge_objective(const RegressionData& data, const VectorXd& beta, double lambda,
                         double alpha) {
  require_positive(lambda, "rbridge lambda");
  require_positive(alpha, "rbridge alpha");
  double pen = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) pen += std::pow(std::abs(beta(j)), -alpha);
  }
  return rss(data, beta) + lambda * pen;
}

double rbridge_mixing_check(double lambda, double alpha) {
  require_positive(lambda, "rbridge lambda");
  require_positive(alpha, "rbridge alpha");
  const double shape = 1.0 / alpha + 1.0;
  double worst = 0.0;
  for (const double beta : symmetric_log_grid(1e-3, 50.0, 101)) {
    const double upper = std::pow(std::abs(beta), alpha);
    const double mix = log_integrate(
        [&](double eta) {
          const double x_m = std::pow(eta, 1.0 / alpha);
          if (!(x_m > 0.0)) return 0.0;
          return double_pareto_density(beta, {x_m, 1.0}) *
                 inverse_gamma_density(eta, shape, lambda);
        },
        0.0, upper, "rbridge_mixing_check");
    worst = std::max(worst, std::abs(mix - igg_density(beta, lambda, alpha)));
  }
  return worst;
}

LsaSurrogate lsa_build(const VectorXd& beta_tilde, const MatrixXd& info) {
  const Index p = beta_tilde.size();
  if (info.rows() != p || info.cols() != p) throw ConfigError("lsa_build: dimension mismatch");
  if (!info.isApprox(info.transpose(), 1e-10)) throw NumericError("lsa_build: info not symmetric");
  Eigen::LLT<MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) throw NumericError("lsa_build: info not positive definite");
  LsaSurrogate s;
  s.beta_tilde = beta_tilde;
  s.info = info;
  RegressionData& d = s.pseudo_data;
  d.X = llt.matrixU();
  d.y = d.X * beta_tilde;
  d.n = p;
  d.p = p;
  d.column_means = VectorXd::Zero(p);
  d.column_scales = VectorXd::Ones(p);
  d.response_mean = 0.0;
  for (Index j = 0; j < p; ++j) d.names.push_back("x" + std::to_string(j + 1));
  return s;
}

// ---------------------------------------------------------------------------
// Inverse-uniform mixtures

double reciprocal_base_density(const ReciprocalFamily& family, double beta) {
  const double a = std::abs(beta);
  return std::visit(
      [a](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StudentTFamily>) {
          return std::pow(1.0 + a * a / (f.lambda * f.lambda), -(f.v + 1.0) / 2.0);
        } else if constexpr (std::is_same_v<T, GdpFamily>) {
          return std::pow(1.0 + a / f.tau, -(1.0 + f.alpha));
        } else if constexpr (std::is_same_v<T, HorseshoeLikeFamily>) {
          return std::log1p(f.tau * f.tau / (a * a));
        } else {
          return std::exp(-f.lambda * a);
        }
      },
      family);
}

double reciprocal_mixing_density(const ReciprocalFamily& family, double t) {
  if (!(t > 0.0)) return 0.0;
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StudentTFamily>) {
          const double r = t * t / (f.lambda * f.lambda);
          return 2.0 * (f.v + 1.0) * r * std::pow(1.0 + r, -(f.v + 3.0) / 2.0);
        } else if constexpr (std::is_same_v<T, GdpFamily>) {
          return 2.0 * (1.0 + f.alpha) * (t / f.tau) * std::pow(1.0 + t / f.tau, -(2.0 + f.alpha));
        } else if constexpr (std::is_same_v<T, HorseshoeLikeFamily>) {
          return 4.0 / (1.0 + t * t / (f.tau * f.tau));
        } else {
          return 2.0 * f.lambda * t * std::exp(-f.lambda * t);
        }
      },
      family);
}

double reciprocal_truncation(const ReciprocalFamily& family) {
  if (const auto* hs = std::get_if<HorseshoeLikeFamily>(&family)) {
    // Tail mass of h beyond T is about 4 tau^2 / T out of 2 pi tau.
    return hs->tau * 1e9;
  }
  return kInf;
}

namespace {

double mixing_normalizer(const ReciprocalFamily& family) {
  return log_integrate([&](double t) { return reciprocal_mixing_density(family, t); }, 0.0,
                       reciprocal_truncation(family), "reciprocal mixing normalizer");
}

double base_half_mass(const ReciprocalFamily& family) {
  return log_integrate([&](double t) { return reciprocal_base_density(family, t); }, 0.0, kInf,
                       "reciprocal base normalizer");
}

double mixture_with(const ReciprocalFamily& family, double theta, double z) {
  if (theta == 0.0) return 0.0;
  const double t_max = reciprocal_truncation(family);
  const double lower = 1.0 / std::abs(theta);
  if (lower >= t_max) return 0.0;
  const double mix = log_integrate(
      [&](double t) { return reciprocal_mixing_density(family, t) / (2.0 * t * theta * theta); },
      lower, t_max, "reciprocal mixture");
  return mix / z;
}

double reciprocalized_with(const ReciprocalFamily& family, double theta, double half) {
  if (theta == 0.0) return 0.0;
  return reciprocal_base_density(family, 1.0 / theta) / (2.0 * half * theta * theta);
}

}  // namespace

double reciprocal_mixture_density(const ReciprocalFamily& family, double theta) {
  validate_family(family);
  return mixture_with(family, theta, mixing_normalizer(family));
}

double reciprocalized_density(const ReciprocalFamily& family, double theta) {
  validate_family(family);
  return reciprocalized_with(family, theta, base_half_mass(family));
}

double reciprocal_mixture_check(const ReciprocalFamily& family) {
  validate_family(family);
  const auto* laplace = std::get_if<LaplaceFamily>(&family);
  const double z = mixing_normalizer(family);
  const double half = base_half_mass(family);
  double worst = 0.0;
  for (const double theta : symmetric_log_grid(1e-2, 100.0, 121)) {
    const double lhs = mixture_with(family, theta, z);
    const double rhs =
        laplace ? ide_density(theta, laplace->lambda) : reciprocalized_with(family, theta, half);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Inverse Bartlett-Fejer kernels

BartlettFejerConstants bartlett_fejer_constants(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("Bartlett-Fejer mixture requires alpha in (0, 1]");
  }
  BartlettFejerConstants c;
  const double k = 1.0 / alpha;
  c.c1 = 1.0 / log_integrate([k](double w) { return std::pow(w, 1.0 + k) * std::exp(-w); }, 0.0,
                             kInf, "Bartlett-Fejer c1");
  c.c2 = 1.0 / log_integrate([k](double w) { return std::pow(w, k) * std::exp(-w); }, 0.0, kInf,
                             "Bartlett-Fejer c2");
  c.weight1 = (1.0 + alpha) / 2.0;
  c.weight2 = (1.0 - alpha) / 2.0;
  if (alpha == 1.0 && c.weight2 != 0.0) {
    throw NumericError("Bartlett-Fejer: second component must vanish at alpha = 1");
  }
  return c;
}

namespace {

double bartlett_fejer_density_with(double beta, double lambda, double alpha,
                                   const BartlettFejerConstants& c) {
  if (beta == 0.0) return 0.0;
  const double k = 1.0 / alpha;
  const double lk = std::pow(lambda, k);
  const double a = std::abs(beta);
  auto p_w = [&](double w) {
    return c.weight1 * c.c1 * std::pow(w, 1.0 + k) * std::exp(-w) +
           c.weight2 * c.c2 * std::pow(w, k) * std::exp(-w);
  };
  auto integrand = [&](double w) {
    const double wk = std::pow(w, k);
    const double kernel = std::max(1.0 - lk / (a * wk), 0.0);
    return lk / (beta * beta * wk) * kernel * p_w(w);
  };
  // The kernel vanishes for w below lambda / |beta|^alpha.
  const double w0 = lambda / std::pow(a, alpha);
  return log_integrate(integrand, w0, kInf, "Bartlett-Fejer mixture");
}

}  // namespace

double bartlett_fejer_density(double beta, double lambda, double alpha) {
  require_positive(lambda, "Bartlett-Fejer lambda");
  return bartlett_fejer_density_with(beta, lambda, alpha, bartlett_fejer_constants(alpha));
}

double bartlett_fejer_check(double lambda, double alpha) {
  require_positive(lambda, "Bartlett-Fejer lambda");
  const BartlettFejerConstants c = bartlett_fejer_constants(alpha);
  double worst = 0.0;
  for (const double beta : symmetric_log_grid(1e-3, 50.0, 101)) {
    const double mix = bartlett_fejer_density_with(beta, lambda, alpha, c);
    worst = std::max(worst, std::abs(mix - igg_density(beta, lambda, alpha)));
  }
  return worst;
}

}  // namespace rlasso
