#pragma once

#include "basket/allocation.hpp"
#include "basket/comparators.hpp"
#include "basket/decision.hpp"
#include "basket/scenario.hpp"

#include <cstdint>
#include <vector>

namespace basket::sim {

/// Posterior-analysis knobs shared by interim refits and the final analysis.
struct AnalysisConfig {
  ppmx::McmcConfig interim_mcmc{1000, 500, 5, 0};
  ppmx::McmcConfig final_mcmc{4000, 2000, 5, 0};
  double mass = 1.0;
  double dirichlet_weight = 1.0;
  double nix_k = 0.1;
  double nix_nu = 2.0;
  int superiority_mc = 4000;
  bool include_arm_covariate = true;

  void validate() const;
};

struct TrialConfig {
  alloc::DesignConfig design;
  AnalysisConfig analysis;
  decision::UtilityConfig utility;
  bool adaptive = true;     // false reproduces the design without adaptive randomization
  bool censoring = false;   // administrative censoring at each analysis window
  double accrual_months = 24.0;
  bool capture_inputs = false;  // keep per-replicate decision inputs (calibration)

  void validate() const;
};

/// Per-replicate error indicators relative to the truth's report.
struct ErrorBits {
  bool tie_applicable = false;
  bool tie = false;
  bool tpr_applicable = false;
  bool tpr = false;
  bool subset_applicable = false;  // truth is a pair set
  int tsr_hits = 0;
  int tsr_total = 0;
  int fsr_hits = 0;
  int fsr_total = 0;
  bool fnr = false;
  bool fpr = false;
};

struct RepResult {
  std::uint64_t seed = 0;
  SubpopulationReport report = SubpopulationReport::none();
  SubpopulationReport truth = SubpopulationReport::none();
  double horizon = 0.0;
  double prob_h0 = 0.0;
  double prob_h1 = 0.0;
  std::vector<MutationTumorPair> eligible;
  ErrorBits bits;
  Eigen::MatrixXd alloc_frac;  // per-pair share randomized to TT; NaN for empty pairs
  TeMetrics te;
  std::vector<alloc::AllocationRecord> audit;
  // present only when TrialConfig::capture_inputs is set
  std::optional<decision::DecisionInputs> posterior_inputs;
  std::optional<decision::DecisionInputs> truth_inputs;
};

ErrorBits error_bits(const SubpopulationReport& report, const SubpopulationReport& truth,
                     std::span<const MutationTumorPair> eligible);

/// One complete simulated trial: run-in, cohort-wise refits with adaptive
/// randomization, final analysis after the follow-up window, report search
/// and TE summaries. Deterministic given the seed.
RepResult run_trial(const Scenario& scenario, const TrialConfig& config, const TrialFrame& frame,
                    std::uint64_t seed);

/// Analysis model (schema + priors) for a dataset, as used by the trial.
ppmx::AnalysisModel analysis_model(const ppmx::PpmxData& data, const TrialFrame& frame,
                                   const AnalysisConfig& config);

}  // namespace basket::sim
