#pragma once

namespace rlasso::special {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_pdf(double x);
double normal_cdf(double x);
// log Phi(x), accurate deep into the lower tail.
double log_normal_cdf(double x);
double normal_quantile(double p);
// Phi^{-1}(exp(log_p)) for log_p <= 0, valid when exp(log_p) underflows.
double normal_quantile_from_log(double log_p);

// Regularized incomplete gamma functions and the inverse of the upper one.
double gamma_p(double shape, double x);
double gamma_q(double shape, double x);
double gamma_q_inv(double shape, double q);
double lgamma(double x);
double tgamma(double x);

}  // namespace rlasso::special
