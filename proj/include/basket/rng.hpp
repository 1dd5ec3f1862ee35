#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace basket {

/// splitmix64 step; used for deterministic seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic named-stream seed: hash of (master, a, b). Every RNG in the
/// project is seeded through this so that replicates and analyses own
/// independent streams regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= a + 0x9E3779B97F4A7C15ULL;
  h ^= splitmix64(s);
  s ^= b + 0xC2B2AE3D27D4EB4FULL;
  h ^= splitmix64(s);
  return h;
}

/// Counting RNG wrapper with explicitly pinned sampling algorithms, so draw
/// sequences depend only on our code and the mt19937_64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    return engine_();
  }
  std::uint64_t counter() const { return counter_; }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe under log().
  double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(uniform() * n) % n; }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential() { return -std::log(uniform_pos()); }

  /// Box-Muller (single value per call).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mu, double sd) { return mu + sd * normal(); }

  /// Marsaglia-Tsang; unit scale.
  double gamma(double shape);

  double chisq(double df) { return 2.0 * gamma(0.5 * df); }

  /// nu * s2 / chisq(nu).
  double scaled_inv_chisq(double nu, double s2) { return nu * s2 / chisq(nu); }

  double inverse_gamma(double shape, double rate) { return rate / gamma(shape); }

  /// Normal truncated to (lower, inf); plain rejection near the bulk,
  /// translated-exponential rejection in the upper tail.
  double truncated_normal_lower(double mu, double sigma, double lower);

  /// Index sampled proportionally to exp(logw - max(logw)).
  int categorical_from_log(const Eigen::ArrayXd& logw);

  /// Index sampled proportionally to nonnegative weights.
  int categorical(const Eigen::ArrayXd& w);

 private:
  std::mt19937_64 engine_;
  std::uint64_t counter_ = 0;
};

}  // namespace basket
