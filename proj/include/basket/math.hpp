#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <stdexcept>

namespace basket::math {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

/// Standard normal CDF via erfc (accurate in both tails).
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Standard normal survival function P(X > x).
inline double normal_sf(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

inline double normal_logpdf(double x, double mu, double sigma2) {
  const double d = x - mu;
  return -0.5 * (kLogTwoPi + std::log(sigma2) + d * d / sigma2);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Mean of a standard normal truncated to (a, inf).
inline double truncated_normal_mean(double mu, double sigma, double lower) {
  const double a = (lower - mu) / sigma;
  const double tail = normal_sf(a);
  return mu + sigma * normal_pdf(a) / tail;
}

/// Regularized incomplete beta I_x(a, b), continued fraction (Lentz).
double incomplete_beta(double a, double b, double x);

/// CDF / survival / log density of the Student t.
double student_t_cdf(double t, double nu);
double student_t_sf(double t, double nu);
double student_t_logpdf(double x, double nu, double mu, double scale_sd);

/// Empirical quantile with linear interpolation at position p*(n-1)
/// between order statistics. Input need not be sorted.
double empirical_quantile(std::span<const double> values, double p);

/// Numerically stable log(sum(exp(v))) over any dense Eigen expression.
template <class Derived>
double log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  if (v.size() == 0) throw std::invalid_argument("log_sum_exp: empty input");
  const double m = v.derived().maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf (or a nan propagates)
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v.derived()(i) - m);
  return m + std::log(s);
}

}  // namespace basket::math
