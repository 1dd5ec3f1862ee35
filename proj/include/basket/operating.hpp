#pragma once

#include "basket/trial.hpp"

#include <optional>
#include <span>

namespace basket::sim {

/// Frequencies of decisions over repeated simulated trials. Rates that do not
/// apply to the scenario's truth are left unset.
struct OperatingChars {
  std::optional<double> tie;
  std::optional<double> tsr;
  std::optional<double> tpr;
  std::optional<double> fsr;
  std::optional<double> fnr;
  std::optional<double> fpr;
  Eigen::MatrixXd pr_a;             // per-pair report frequency
  Eigen::MatrixXd mean_alloc_frac;  // per-pair mean share randomized to TT
  int n_reps = 0;
};

/// Aggregates persisted replicate results; a pure function of the records so
/// that recomputation from disk reproduces it exactly.
OperatingChars operating_characteristics(std::span<const RepResult> reps, const TrialFrame& frame);

/// Runs n_reps independent trials with per-replicate derived seeds, fanned
/// over threads, aggregated in replicate order.
std::vector<RepResult> run_replicates(const Scenario& scenario, const TrialConfig& config,
                                      const TrialFrame& frame, std::uint64_t master_seed,
                                      int n_reps, int n_threads);

}  // namespace basket::sim
