#pragma once

#include "basket/domain.hpp"
#include "basket/mcmc.hpp"
#include "basket/predictive.hpp"
#include "basket/scenario.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace basket::decision {

using predictive::HorizonConfig;

struct UtilityConfig {
  double u0 = 1.3;     // payoff for correctly reporting nothing
  double u1 = 20.0;    // payoff for correctly reporting an overall effect
  double alpha = 0.125;
  double beta = 0.4;   // minimum clinically meaningful log-hazard gap
  int min_size = 5;
  double eps0 = 0.15;  // half-width of the log-HR band defining "no effect anywhere"
  double eps1 = 1.0;   // max log-HR spread across pairs for a "common effect"

  void validate() const;
};

/// Small-subgroup penalty: 0 below min_size, n^alpha otherwise.
double size_penalty(int n_a, double alpha, int min_size = 5);

/// Everything the report search needs: the eligible pairs, their subgroup
/// sizes, and a (draws x pairs) matrix of log hazard ratios. A truth
/// evaluation is the single-row case.
struct DecisionInputs {
  std::vector<MutationTumorPair> pairs;
  Eigen::VectorXi subgroup_sizes;
  Eigen::MatrixXd log_hr;

  int n_pairs() const { return static_cast<int>(pairs.size()); }
  int n_draws() const { return static_cast<int>(log_hr.rows()); }
  void validate() const;
};

/// theta in H0: every pair's |log HR| within eps0.
bool h0_member(const Eigen::RowVectorXd& log_hr_row, double eps0);
/// theta in H1: a common strictly positive effect — log-HR spread within
/// eps1 and every pair above eps0. Mutually exclusive with H0.
bool h1_member(const Eigen::RowVectorXd& log_hr_row, double eps0, double eps1);

/// Utility of a report under one parameter draw.
double utility(const SubpopulationReport& report, const Eigen::RowVectorXd& log_hr_row,
               const DecisionInputs& inputs, const UtilityConfig& config);

/// Posterior expected utility: arithmetic mean over draws.
double expected_utility(const SubpopulationReport& report, const DecisionInputs& inputs,
                        const UtilityConfig& config);

struct Candidate {
  SubpopulationReport report;
  double expected_utility = 0.0;
};

struct ReportResult {
  SubpopulationReport best;
  double best_utility = 0.0;
  double prob_h0 = 0.0;
  double prob_h1 = 0.0;
  Eigen::VectorXd pair_contribution;  // expected per-pair middle-branch contribution
  Eigen::VectorXd pair_mean_log_hr;
  std::vector<Candidate> ranked;      // A0, A1, singletons and the best set, ranked
};

/// Bayes-rule search over {A0, A1} and nonempty subsets of the eligible
/// pairs. Additivity of the middle branch makes the best pair set the set of
/// pairs with strictly positive expected contribution. Ties break toward A0,
/// then A1, then smaller sets, then lexicographic pair order.
ReportResult optimal_report(const DecisionInputs& inputs, const UtilityConfig& config);

/// Decision inputs from a posterior sample: per-draw per-pair log hazard
/// ratios over the enrolled population's eligible pairs.
DecisionInputs decision_inputs(const ppmx::PosteriorDraws& draws,
                               std::span<const Patient> patients, const TrialFrame& frame,
                               const HorizonConfig& horizon, int min_size);

/// Single-row decision inputs with hazard ratios evaluated under the
/// simulation truth (closed-form lognormal survival).
DecisionInputs truth_inputs(const sim::Scenario& scenario, std::span<const Patient> patients,
                            const TrialFrame& frame, const HorizonConfig& horizon, int min_size);

/// Utility of a report against the fixed simulation truth.
double true_utility(const SubpopulationReport& report, const sim::Scenario& scenario,
                    std::span<const Patient> patients, const TrialFrame& frame,
                    const UtilityConfig& config, const HorizonConfig& horizon);

/// The report maximizing utility under the simulation truth.
ReportResult true_report(const sim::Scenario& scenario, std::span<const Patient> patients,
                         const TrialFrame& frame, const UtilityConfig& config,
                         const HorizonConfig& horizon);

/// Total order used for tie-breaking; true when lhs is preferred over rhs at
/// equal expected utility.
bool report_preferred(const SubpopulationReport& lhs, const SubpopulationReport& rhs);

}  // namespace basket::decision
