#pragma once

#include "basket/domain.hpp"
#include "basket/rng.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace basket::sim {

struct Interaction {
  MutationTumorPair pair;
  double coef = 0.0;
};

/// Simulation-truth lognormal regression:
///   log(y) ~ N(beta0 * z + sum_j beta_j * z * mc_ij, sigma^2),
/// with mc_ij = 1 when patient i carries interaction j's mutation-tumor pair.
struct Scenario {
  double beta0 = 0.0;
  std::vector<Interaction> interactions;
  double sigma = 0.2;
  Eigen::MatrixXi population;  // aberrations x tumors per-pair sample sizes

  double log_mean(const Patient& patient, Arm arm) const;
  void validate(const TrialFrame& frame) const;

  /// Default per-pair sample sizes for the five-aberration, three-tumor frame.
  static Eigen::MatrixXi default_population();
  /// The six built-in simulation scenarios (1-based index).
  static Scenario builtin(int number, const TrialFrame& frame);
};

/// Exact population draw: per-pair counts match the scenario's population
/// matrix; each patient carries exactly one aberration recorded as present
/// and all others absent; enrollment order is a seeded uniform permutation.
std::vector<Patient> sample_population(const Scenario& scenario, const TrialFrame& frame,
                                       Rng& rng);

/// One event time from the truth for a patient under the given arm.
double true_outcome_time(const Patient& patient, Arm arm, const Scenario& scenario, Rng& rng);

/// Closed-form truth summaries used by the decision oracle and TE metrics.
double true_survival(const Scenario& scenario, const Patient& patient, Arm arm, double t);
double true_average_hazard(const Scenario& scenario, const Patient& patient, Arm arm,
                           double horizon_months);
/// Expected event time E(y | x, z) = exp(mu + sigma^2/2).
double true_mean_event_time(const Scenario& scenario, const Patient& patient, Arm arm);

}  // namespace basket::sim
