#pragma once

#include "basket/decision.hpp"
#include "basket/domain.hpp"
#include "basket/scenario.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>

namespace basket::sim {

/// Conjugate normal-inverse-gamma prior on log-PFS per arm:
///   sigma2 ~ InvGamma(shape, rate),  mu | sigma2 ~ N(mu0, sigma2 / lambda).
struct NigPrior {
  double mu0 = 0.0;
  double lambda = 0.01;  // 1 / tau^2
  double shape = 0.01;   // b1
  double rate = 0.01;    // b2

  void validate() const;
};

struct NigPosterior {
  double mu_n = 0.0;
  double lambda_n = 0.0;
  double shape_n = 0.0;
  double rate_n = 0.0;
  int n = 0;

  static NigPosterior update(const NigPrior& prior, std::span<const double> log_times);
  /// Posterior-mean plug-in for E(y): exp(mu_n + E[sigma2]/2).
  double mean_event_time() const;
};

/// Pooled two-arm conjugate analysis on log-PFS. Throws if either arm has no
/// observed outcome.
struct ComparatorPosterior {
  NigPosterior other;
  NigPosterior targeted;

  const NigPosterior& arm(Arm z) const { return z == Arm::Targeted ? targeted : other; }
};

ComparatorPosterior naive_fit(std::span<const Patient> patients, const NigPrior& prior);

/// Independent per-mutation-stratum fits; a stratum whose arm has no data is
/// marked inestimable (nullopt).
std::vector<std::optional<ComparatorPosterior>> separate_fit(std::span<const Patient> patients,
                                                             const TrialFrame& frame,
                                                             const NigPrior& prior);

enum class FittedDesign { Ours, Naive, Separate };

/// Per-pair |estimated - true| expected PFS under each design's chosen
/// optimal treatment, at the canonical covariate profile of each pair.
/// NaN marks inestimable cells.
struct TeMetrics {
  Eigen::MatrixXd abs_error;  // aberrations x tumors
  Eigen::MatrixXd te_est;
  Eigen::MatrixXd te_true;
};

/// OURS: treatment is TT exactly for pairs inside the final report (and for
/// everyone under an overall report); the estimate is the PPMx posterior
/// predictive mean.
TeMetrics te_metrics_ours(const ppmx::PosteriorDraws& draws, const SubpopulationReport& report,
                          const Scenario& scenario, const TrialFrame& frame);

/// NAIVE / SEPARATE: treatment maximizes the fitted posterior-predictive
/// mean; SEPARATE uses the mutation stratum's fit.
TeMetrics te_metrics_naive(const ComparatorPosterior& fit, const Scenario& scenario,
                           const TrialFrame& frame);
TeMetrics te_metrics_separate(std::span<const std::optional<ComparatorPosterior>> fits,
                              const Scenario& scenario, const TrialFrame& frame);

/// Canonical covariate profile for a pair: its aberration present, all other
/// aberrations absent, its tumor type.
Patient canonical_patient(const MutationTumorPair& pair, const TrialFrame& frame);

}  // namespace basket::sim
