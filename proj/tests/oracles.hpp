#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the library's samplers: draws use std:: distributions on a
// separate engine, and closed forms are re-derived from their formulas.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// N(mu, s2) conditioned on |x| > c by plain rejection.
inline std::vector<double> rejection_mid_truncated_normal(double mu, double s2, double c, int n,
                                                          std::mt19937_64& eng) {
  std::normal_distribution<double> z(mu, std::sqrt(s2));
  std::vector<double> out;
  while (static_cast<int>(out.size()) < n) {
    const double x = z(eng);
    if (std::abs(x) > c) out.push_back(x);
  }
  return out;
}

// Inverse gamma(shape, scale) conditioned on x < upper by rejection.
inline std::vector<double> rejection_truncated_inverse_gamma(double shape, double scale,
                                                             double upper, int n,
                                                             std::mt19937_64& eng) {
  std::gamma_distribution<double> g(shape, 1.0 / scale);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < n) {
    const double x = 1.0 / g(eng);
    if (x < upper) out.push_back(x);
  }
  return out;
}

// Exponential(rate) conditioned on x > lower by rejection.
inline std::vector<double> rejection_truncated_exponential(double rate, double lower, int n,
                                                           std::mt19937_64& eng) {
  std::exponential_distribution<double> e(rate);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < n) {
    const double x = e(eng);
    if (x > lower) out.push_back(x);
  }
  return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// IDE CDF from 1/|b| ~ Exp(lambda): P(|b| > t) = 1 - exp(-lambda / t).
inline double ide_cdf(double b, double lambda) {
  if (b == 0.0) return 0.5;
  const double tail = 0.5 * (1.0 - std::exp(-lambda / std::abs(b)));
  return b < 0.0 ? tail : 1.0 - tail;
}

// Gamma(shape, rate) CDF from the power series
// P(a, x) = x^a e^-x sum_k x^k / Gamma(a + k + 1).
inline double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  const double z = rate * x;
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double term = std::exp(shape * std::log(z) - z + k * std::log(z) -
                                 std::lgamma(shape + k + 1.0));
    sum += term;
    if (k > z && term < 1e-17 * sum) break;
  }
  return std::min(sum, 1.0);
}

// Column-standardized design with centred response, written out longhand.
struct Standardized {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

inline Standardized standardize(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  Standardized s;
  const auto n = X.rows();
  s.X = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) m += X(i, j);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) v += (X(i, j) - m) * (X(i, j) - m);
    const double sd = std::sqrt(v / static_cast<double>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) s.X(i, j) = (X(i, j) - m) / sd;
  }
  double my = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) my += y(i);
  my /= static_cast<double>(n);
  s.y = y.array() - my;
  return s;
}

}  // namespace oracle
