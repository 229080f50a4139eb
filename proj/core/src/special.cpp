#include "rlasso/special.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rlasso/error.hpp"

namespace rlasso::special {

namespace {
constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kLogTiny = -690.0;  // exp(-690) ~ 2.6e-300, safely normal
}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double normal_cdf(double x) { return 0.5 * boost::math::erfc(-x * kSqrt1_2); }

double log_normal_cdf(double x) {
  if (x > -30.0) return std::log(normal_cdf(x));
  // Asymptotic expansion of the Mills ratio for the far lower tail.
  const double z2 = 1.0 / (x * x);
  const double series = 1.0 - z2 * (1.0 - 3.0 * z2 * (1.0 - 5.0 * z2 * (1.0 - 7.0 * z2)));
  return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw NumericError("normal_quantile: probability outside [0,1]");
  }
  return -boost::math::erfc_inv(2.0 * p) / kSqrt1_2;
}

double normal_quantile_from_log(double log_p) {
  if (!(log_p <= 0.0)) throw NumericError("normal_quantile_from_log: log_p must be <= 0");
  if (log_p > kLogTiny) return normal_quantile(std::exp(log_p));
  // Newton iterations on log Phi(x) = log_p starting from the leading-order
  // tail inversion.
  double x = -std::sqrt(-2.0 * log_p - std::log(-4.0 * M_PI * log_p));
  for (int it = 0; it < 50; ++it) {
    const double f = log_normal_cdf(x) - log_p;
    // d/dx log Phi(x) = phi(x)/Phi(x) = exp(log phi - log Phi)
    const double slope = std::exp(-0.5 * x * x - kLogSqrt2Pi - log_normal_cdf(x));
    const double step = f / slope;
    x -= step;
    if (std::abs(step) < 1e-14 * std::abs(x)) break;
  }
  return x;
}

double gamma_p(double shape, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(shape, x);
}

double gamma_q(double shape, double x) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(shape, x);
}

double gamma_q_inv(double shape, double q) { return boost::math::gamma_q_inv(shape, q); }

double lgamma(double x) { return boost::math::lgamma(x); }
double tgamma(double x) { return boost::math::tgamma(x); }

}  // namespace rlasso::special
