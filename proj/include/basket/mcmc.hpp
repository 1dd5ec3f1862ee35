#pragma once

#include "basket/partition.hpp"
#include "basket/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace basket::ppmx {

struct McmcConfig {
  int iterations = 2000;
  int burn_in = 1000;
  int thin = 5;
  std::uint64_t seed = 0;

  void validate() const;
  int n_draws() const { return (iterations - burn_in) / thin; }
};

/// Posterior sample: partition snapshots after burn-in and thinning.
struct PosteriorDraws {
  AnalysisModel model;
  std::vector<PartitionState> draws;
  std::uint64_t seed = 0;
  int iterations = 0;
  int burn_in = 0;
  int thin = 0;

  int n_draws() const { return static_cast<int>(draws.size()); }
};

/// Redraws imputed log times for all censored patients from their cluster's
/// lognormal truncated below at the censoring bound.
void impute_censored(PartitionState& state, const PpmxData& data, Rng& rng);

/// Full-conditional log weights for reassigning patient i, computed with i
/// removed from the state. Entries 0..J-1 are the existing clusters, entry J
/// is a new cluster (prior-predictive likelihood). Exposed for tests.
Eigen::ArrayXd reassign_log_weights(const PartitionState& state, int i, const PpmxData& data,
                                    const AnalysisModel& model, const SimilarityEngine& engine);

/// One Gibbs update of patient i's cluster membership.
void gibbs_reassign(PartitionState& state, int i, const PpmxData& data, const AnalysisModel& model,
                    const SimilarityEngine& engine, Rng& rng);

/// Conjugate redraw of cluster j's (mu, sigma2) given its current log times.
void update_cluster_params(PartitionState& state, int j, const AnalysisModel& model, Rng& rng);

/// Full sampler. Sweep order: impute censored times, reassign each patient in
/// index order, redraw every cluster's parameters. Deterministic given the
/// seed in config. Throws on an empty dataset.
PosteriorDraws mcmc_run(const PpmxData& data, const AnalysisModel& model, const McmcConfig& config);

/// Diagnostics export: one row per draw per cluster
/// (draw,cluster,size,mu,sigma2).
void write_draws(std::ostream& out, const PosteriorDraws& draws);

}  // namespace basket::ppmx
