#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace basket::ppmx {

enum class CovariateType { Categorical, Continuous, Count };

/// Normal-inverse-chi-square parameters (m, k, nu, s2):
///   sigma2 ~ ScaledInvChisq(nu, s2),  mu | sigma2 ~ N(m, sigma2 / k).
struct NixParams {
  double m = 0.0;
  double k = 1.0;
  double nu = 1.0;
  double s2 = 1.0;

  void validate() const;
};

struct GammaHyper {
  double shape = 1.0;
  double rate = 1.0;

  void validate() const;
};

/// One covariate column together with the auxiliary-model hyperparameters
/// that define its similarity factor.
struct ColumnSpec {
  CovariateType type = CovariateType::Categorical;
  std::string name;
  Eigen::VectorXd dirichlet;  // categorical: one positive weight per level
  NixParams nix;              // continuous
  GammaHyper gamma;           // count

  int levels() const { return static_cast<int>(dirichlet.size()); }
  void validate() const;
};

struct SimilarityHyper {
  std::vector<ColumnSpec> columns;

  int n_columns() const { return static_cast<int>(columns.size()); }
  void validate() const;
};

struct CohesionConfig {
  double mass = 1.0;  // M > 0 in c(S) = M * (|S|-1)!

  void validate() const;
};

/// Per-cluster per-column sufficient statistics over recorded values.
struct ColumnStats {
  std::vector<int> counts;  // categorical: per-level counts
  int n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  double sum_lgamma = 0.0;  // count: sum of lgamma(x+1)

  static ColumnStats empty_for(const ColumnSpec& spec);
  void add(double value, const ColumnSpec& spec);
  void remove(double value, const ColumnSpec& spec);
};

/// Conjugate posterior of NixParams given n, sum, sumsq of observations.
NixParams nix_posterior(const NixParams& prior, int n, double sum, double sumsq);

/// Exact log marginal of a column's recorded values under its auxiliary
/// conjugate model; 0 for an empty multiset.
double log_similarity(const ColumnStats& stats, const ColumnSpec& spec);

// Value-level marginals. Categories are 0-based; out-of-range or negative
// inputs raise std::invalid_argument.
double similarity_categorical(const std::vector<int>& values, const Eigen::VectorXd& dirichlet);
double similarity_continuous(const std::vector<double>& values, const NixParams& hyper);
double similarity_count(const std::vector<int>& values, const GammaHyper& hyper);

/// Product over columns of per-column marginals; NaN cells are skipped
/// (only recorded entries enter a factor).
double product_similarity(const Eigen::MatrixXd& rows, const SimilarityHyper& hyper);

// Bayes-theorem evaluation of the same marginals through an arbitrary probe
// point of the auxiliary parameter. Used as a numerical cross-check: every
// probe must reproduce the direct marginal.
double similarity_bayes_identity_categorical(const std::vector<int>& values,
                                             const Eigen::VectorXd& dirichlet,
                                             const Eigen::VectorXd& probe);
double similarity_bayes_identity_count(const std::vector<int>& values, const GammaHyper& hyper,
                                       double probe_rate);
double similarity_bayes_identity_continuous(const std::vector<double>& values,
                                            const NixParams& hyper, double probe_mu,
                                            double probe_var);

/// Precomputed log tables for the hot incremental ratios. Immutable after
/// construction; safe to share across threads.
class SimilarityEngine {
 public:
  SimilarityEngine(SimilarityHyper hyper, CohesionConfig cohesion, int max_cluster_size);

  const SimilarityHyper& hyper() const { return hyper_; }
  const CohesionConfig& cohesion() const { return cohesion_; }

  /// log g(S + v) - log g(S) for one recorded value.
  double log_ratio_add(int col, const ColumnStats& stats, double value) const;

  /// log g({v}) for a singleton.
  double log_singleton(int col, double value) const;

  /// log of the cohesion ratio c(S+i)/c(S) = |S| for an existing cluster.
  double log_size(int size) const;

  double log_mass() const { return log_mass_; }

 private:
  SimilarityHyper hyper_;
  CohesionConfig cohesion_;
  double log_mass_;
  // cat_level_[col][level][n] = log(alpha_level + n); cat_total_[col][n] = log(sum(alpha) + n)
  std::vector<std::vector<std::vector<double>>> cat_level_;
  std::vector<std::vector<double>> cat_total_;
  std::vector<double> log_int_;  // log(k) for k >= 1
};

}  // namespace basket::ppmx
