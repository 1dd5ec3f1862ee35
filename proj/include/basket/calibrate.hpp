#pragma once

#include "basket/operating.hpp"

#include <vector>

namespace basket::sim {

struct CalibrationTargets {
  double tie = 0.05;  // restricted from above on the no-effect scenario
  double tpr = 0.90;  // reached from below on the common-effect scenario
};

struct CalibrationRow {
  double value = 0.0;  // grid point
  double rate = 0.0;   // achieved TIE or TPR
};

struct CalibrationResult {
  decision::UtilityConfig selected;
  bool tie_met = false;
  bool tpr_met = false;
  std::vector<CalibrationRow> tie_table;  // one row per u0 grid point
  std::vector<CalibrationRow> tpr_table;  // one row per u1 grid point
};

/// Grid search over (u0, u1) at fixed (alpha, beta): the trials are simulated
/// once per scenario and the report rule is re-evaluated per grid point.
/// Picks the smallest u0 with TIE <= target, then the smallest u1 with
/// TPR >= target; falls back to the best achievable value with the met flag
/// cleared when no grid point reaches a target.
CalibrationResult calibrate(const Scenario& null_scenario, const Scenario& effect_scenario,
                            const TrialConfig& config, const TrialFrame& frame,
                            std::span<const double> u0_grid, std::span<const double> u1_grid,
                            const CalibrationTargets& targets, std::uint64_t master_seed,
                            int n_reps, int n_threads);

}  // namespace basket::sim
