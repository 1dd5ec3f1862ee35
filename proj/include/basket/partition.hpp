#pragma once

#include "basket/dataset.hpp"
#include "basket/similarity.hpp"

#include <Eigen/Core>

#include <vector>

namespace basket::ppmx {

/// One cluster: covariate statistics, log-time statistics over members that
/// carry an (observed or imputed) outcome, and the lognormal parameters.
struct Cluster {
  int size = 0;
  std::vector<ColumnStats> cols;

  int n_y = 0;
  double sum_logy = 0.0;
  double sumsq_logy = 0.0;

  double mu = 0.0;
  double sigma2 = 1.0;

  // caches for the lognormal likelihood; refreshed by set_params
  double loglik_const = 0.0;
  double neg_half_inv_var = -0.5;

  void set_params(double mu_in, double sigma2_in);
  double log_lik(double logy) const {
    const double d = logy - mu;
    return loglik_const + neg_half_inv_var * d * d;
  }
};

/// Random partition of the patients plus cluster-specific parameters and the
/// current working log event times (imputed values for censored patients).
struct PartitionState {
  std::vector<int> assignment;   // per patient, 0-based contiguous labels
  std::vector<Cluster> clusters;
  Eigen::ArrayXd log_time;       // NaN for patients without an outcome

  int n_clusters() const { return static_cast<int>(clusters.size()); }

  /// Adds patient i (covariates + outcome stats) to cluster j.
  void add_to_cluster(int i, int j, const PpmxData& data, const SimilarityHyper& hyper);
  /// Removes patient i from its cluster; drops the cluster if it empties.
  void remove_from_cluster(int i, const PpmxData& data, const SimilarityHyper& hyper);

  /// Rebuilds all statistics from scratch and checks the state invariants
  /// (contiguous labels, nonempty clusters, positive variances, imputed
  /// times above their censoring bounds). Throws on violation.
  void validate(const PpmxData& data, const SimilarityHyper& hyper) const;
};

/// Fresh single-cluster state. Imputed log times start at their censoring
/// bound; parameters start at the prior center.
PartitionState initial_state(const PpmxData& data, const AnalysisModel& model);

/// Unnormalized log mass of a partition under the covariate-tilted product
/// partition prior: sum over clusters of log g(x*_j) + log c(S_j).
double partition_log_mass(const std::vector<int>& assignment, const PpmxData& data,
                          const CohesionConfig& cohesion, const SimilarityHyper& hyper);
double partition_log_mass(const PartitionState& state, const PpmxData& data,
                          const CohesionConfig& cohesion, const SimilarityHyper& hyper);

}  // namespace basket::ppmx
