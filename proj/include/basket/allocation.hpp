#pragma once

#include "basket/domain.hpp"
#include "basket/rng.hpp"

#include <optional>
#include <vector>

namespace basket::alloc {

/// Trial design: run-in size, adaptive-phase size, cohort refit interval,
/// randomization probability clamp and the final-analysis follow-up window.
struct DesignConfig {
  int run_in = 100;
  int adaptive = 300;
  int cohort = 50;
  double p0 = 0.1;
  double p1 = 0.9;
  double follow_up_months = 6.0;

  int n_max() const { return run_in + adaptive; }
  void validate() const;
};

enum class Phase { RunIn, Adaptive };

/// Clamped adaptive randomization probability: p0 below p0, identity on
/// [p0, p1], p1 above p1.
double allocation_prob(double pi, const DesignConfig& config);

struct AllocationRecord {
  int patient_id = 0;
  Phase phase = Phase::RunIn;
  double pi = 0.5;        // run-in records carry 0.5
  double prob_targeted = 0.5;
  Arm arm = Arm::Other;
  std::uint64_t rng_counter = 0;
};

/// Randomizes one patient. pi must be supplied exactly in the adaptive phase.
Arm assign_arm(const Patient& patient, Phase phase, std::optional<double> pi,
               const DesignConfig& config, Rng& rng, AllocationRecord* audit = nullptr);

struct TrialSchedule {
  /// Model refits happen after these many patients have accrued; each refit
  /// governs allocation for the following cohort.
  std::vector<int> refit_after;
  double follow_up_months = 6.0;
};

TrialSchedule trial_schedule(const DesignConfig& config);

}  // namespace basket::alloc
