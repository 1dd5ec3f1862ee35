#include "basket/calibrate.hpp"

#include <algorithm>
#include <stdexcept>

namespace basket::sim {

namespace {

/// Re-evaluates the report rule for one utility configuration against the
/// captured per-replicate inputs; returns the rate of the requested event.
double rate_for(std::span<const RepResult> reps, const decision::UtilityConfig& utility,
                bool event_is_tie) {
  int applicable = 0, hits = 0;
  for (const RepResult& rep : reps) {
    const auto best = decision::optimal_report(*rep.posterior_inputs, utility).best;
    const auto truth = decision::optimal_report(*rep.truth_inputs, utility).best;
    if (event_is_tie) {
      if (truth.kind() != SubpopulationReport::Kind::None) continue;
      ++applicable;
      if (best.kind() != SubpopulationReport::Kind::None) ++hits;
    } else {
      if (truth.kind() != SubpopulationReport::Kind::Overall) continue;
      ++applicable;
      if (best.kind() == SubpopulationReport::Kind::Overall) ++hits;
    }
  }
  if (applicable == 0) return event_is_tie ? 1.0 : 0.0;
  return static_cast<double>(hits) / applicable;
}

}  // namespace

CalibrationResult calibrate(const Scenario& null_scenario, const Scenario& effect_scenario,
                            const TrialConfig& config, const TrialFrame& frame,
                            std::span<const double> u0_grid, std::span<const double> u1_grid,
                            const CalibrationTargets& targets, std::uint64_t master_seed,
                            int n_reps, int n_threads) {
  if (u0_grid.empty() || u1_grid.empty())
    throw std::invalid_argument("calibrate: grids must be nonempty");

  TrialConfig captured = config;
  captured.capture_inputs = true;
  const auto null_reps =
      run_replicates(null_scenario, captured, frame, derive_seed(master_seed, 0xca1, 0), n_reps,
                     n_threads);
  const auto effect_reps =
      run_replicates(effect_scenario, captured, frame, derive_seed(master_seed, 0xca1, 1), n_reps,
                     n_threads);

  CalibrationResult result;
  result.selected = config.utility;

  std::vector<double> u0s(u0_grid.begin(), u0_grid.end());
  std::sort(u0s.begin(), u0s.end());
  decision::UtilityConfig probe = config.utility;
  double best_u0 = u0s.back();
  double best_tie = 2.0;
  for (double u0 : u0s) {
    probe.u0 = u0;
    const double tie = rate_for(null_reps, probe, /*event_is_tie=*/true);
    result.tie_table.push_back({u0, tie});
    if (!result.tie_met && tie <= targets.tie) {
      result.tie_met = true;
      result.selected.u0 = u0;
    }
    if (tie < best_tie) {
      best_tie = tie;
      best_u0 = u0;
    }
  }
  if (!result.tie_met) result.selected.u0 = best_u0;

  std::vector<double> u1s(u1_grid.begin(), u1_grid.end());
  std::sort(u1s.begin(), u1s.end());
  probe = config.utility;
  probe.u0 = result.selected.u0;
  double best_u1 = u1s.back();
  double best_tpr = -1.0;
  for (double u1 : u1s) {
    probe.u1 = u1;
    const double tpr = rate_for(effect_reps, probe, /*event_is_tie=*/false);
    result.tpr_table.push_back({u1, tpr});
    if (!result.tpr_met && tpr >= targets.tpr) {
      result.tpr_met = true;
      result.selected.u1 = u1;
    }
    if (tpr > best_tpr) {
      best_tpr = tpr;
      best_u1 = u1;
    }
  }
  if (!result.tpr_met) result.selected.u1 = best_u1;
  return result;
}

}  // namespace basket::sim
