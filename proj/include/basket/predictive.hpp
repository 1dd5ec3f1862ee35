#pragma once

#include "basket/domain.hpp"
#include "basket/mcmc.hpp"
#include "basket/rng.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace basket::predictive {

using ppmx::AnalysisModel;
using ppmx::NixParams;
using ppmx::PartitionState;
using ppmx::PosteriorDraws;
using ppmx::SimilarityEngine;

struct HorizonConfig {
  double t_months = 1.0;  // > 0

  void validate() const;
};

/// Horizon fixed at the third quartile of the recorded PFS times
/// (linear interpolation between order statistics).
HorizonConfig compute_horizon(std::span<const double> observed_times);

struct PredictiveComponent {
  double weight = 0.0;
  double mu = 0.0;
  double sigma2 = 1.0;
};

/// Cluster-membership-weighted predictive for one query covariate row under
/// one posterior draw. The open component (weight new_weight) is the prior
/// predictive under the NIX base measure.
struct PredictiveMixture {
  std::vector<PredictiveComponent> components;
  double new_weight = 1.0;
  NixParams prior;

  void validate() const;
};

/// Membership probabilities of the query row over the draw's clusters plus a
/// new cluster (last entry). Weights are normalized.
Eigen::ArrayXd membership_weights(const PartitionState& draw, const Eigen::RowVectorXd& x,
                                  const AnalysisModel& model, const SimilarityEngine& engine);

PredictiveMixture mixture_for(const PartitionState& draw, const Eigen::RowVectorXd& x,
                              const AnalysisModel& model, const SimilarityEngine& engine);

// Mixture-level summaries.
double survival(const PredictiveMixture& mix, double t);
double cumulative_hazard(const PredictiveMixture& mix, double t);
double average_hazard(const PredictiveMixture& mix, const HorizonConfig& horizon);
double sample_event_time(const PredictiveMixture& mix, Rng& rng);

/// Rao-Blackwellized expected event time: cluster means at the smoothed
/// per-cluster parameters (the raw posterior-predictive mean of a lognormal
/// with heavy-tailed variance draws is not finite).
double mean_event_time(const PartitionState& draw, const Eigen::ArrayXd& weights,
                       const AnalysisModel& model);

// Draw-level spec operations for a patient queried under arm z.
double survival(const PosteriorDraws& draws, int draw_index, double t, const Patient& patient,
                Arm z, const TrialFrame& frame);
double average_hazard(const PosteriorDraws& draws, int draw_index, const Patient& patient, Arm z,
                      const TrialFrame& frame, const HorizonConfig& horizon);
double subgroup_average_hazard(const PosteriorDraws& draws, int draw_index,
                               const MutationTumorPair& pair, Arm z,
                               std::span<const Patient> patients, const TrialFrame& frame,
                               const HorizonConfig& horizon);
double hazard_ratio(const PosteriorDraws& draws, int draw_index, const MutationTumorPair& pair,
                    std::span<const Patient> patients, const TrialFrame& frame,
                    const HorizonConfig& horizon);

/// n posterior-predictive event times for a patient under arm z; each sample
/// picks a posterior draw uniformly, then a mixture component.
std::vector<double> predictive_sample(const PosteriorDraws& draws, const Patient& patient, Arm z,
                                      const TrialFrame& frame, int n_samples, Rng& rng);

/// Monte Carlo P(event time under TT exceeds event time under O), both
/// potential outcomes conditioned on the same posterior draw.
double superiority_prob(const PosteriorDraws& draws, const Patient& patient,
                        const TrialFrame& frame, int n_mc, Rng& rng);

/// Mixture-level variant used by tests and by the trial loop (one mixture per
/// posterior draw and arm, precomputed).
double superiority_prob(std::span<const PredictiveMixture> mix_other,
                        std::span<const PredictiveMixture> mix_targeted, int n_mc, Rng& rng);

/// Per-draw mixtures for one query row across all posterior draws.
std::vector<PredictiveMixture> mixtures_for_row(const PosteriorDraws& draws,
                                                const Eigen::RowVectorXd& x,
                                                const SimilarityEngine& engine);

}  // namespace basket::predictive
