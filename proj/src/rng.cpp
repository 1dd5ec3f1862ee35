#include "basket/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace basket {

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("Rng::gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = uniform_pos();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double Rng::truncated_normal_lower(double mu, double sigma, double lower) {
  const double a = (lower - mu) / sigma;
  double z;
  if (a < 0.5) {
    do {
      z = normal();
    } while (z < a);
  } else {
    // Robert (1995) translated exponential proposal.
    const double lam = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
      z = a + exponential() / lam;
      const double diff = z - lam;
      if (std::log(uniform_pos()) <= -0.5 * diff * diff) break;
    }
  }
  return mu + sigma * z;
}

int Rng::categorical_from_log(const Eigen::ArrayXd& logw) {
  if (logw.size() == 0) throw std::invalid_argument("categorical_from_log: empty weights");
  const double m = logw.maxCoeff();
  Eigen::ArrayXd w = (logw - m).exp();
  return categorical(w);
}

int Rng::categorical(const Eigen::ArrayXd& w) {
  if (w.size() == 0) throw std::invalid_argument("categorical: empty weights");
  const double total = w.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error("categorical: weights do not sum to a positive finite value");
  }
  double u = uniform() * total;
  for (Eigen::Index k = 0; k + 1 < w.size(); ++k) {
    u -= w(k);
    if (u < 0.0) return static_cast<int>(k);
  }
  return static_cast<int>(w.size() - 1);
}

}  // namespace basket
