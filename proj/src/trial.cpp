#include "basket/trial.hpp"

#include "basket/dataset.hpp"
#include "basket/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace basket::sim {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Named RNG streams within a replicate.
enum : std::uint64_t { kStreamTrial = 1, kStreamMcmc = 2, kStreamPi = 3, kStreamFinal = 4 };
}  // namespace

void AnalysisConfig::validate() const {
  interim_mcmc.validate();
  final_mcmc.validate();
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
  if (!(dirichlet_weight > 0.0)) throw std::invalid_argument("dirichlet weight must be > 0");
  if (!(nix_k > 0.0) || !(nix_nu > 0.0)) throw std::invalid_argument("nix k, nu must be > 0");
  if (superiority_mc < 1) throw std::invalid_argument("superiority_mc must be >= 1");
}

void TrialConfig::validate() const {
  design.validate();
  analysis.validate();
  utility.validate();
  if (!(accrual_months > 0.0)) throw std::invalid_argument("accrual period must be > 0");
}

ppmx::AnalysisModel analysis_model(const ppmx::PpmxData& data, const TrialFrame& frame,
                                   const AnalysisConfig& config) {
  ppmx::AnalysisModel model;
  model.hyper = ppmx::default_similarity_schema(frame, config.dirichlet_weight,
                                                config.include_arm_covariate);
  model.cohesion.mass = config.mass;
  model.outcome_prior = ppmx::empirical_outcome_prior(data, config.nix_k, config.nix_nu);
  model.include_arm = config.include_arm_covariate;
  return model;
}

ErrorBits error_bits(const SubpopulationReport& report, const SubpopulationReport& truth,
                     std::span<const MutationTumorPair> eligible) {
  ErrorBits bits;
  const auto kind = truth.kind();
  bits.tie_applicable = kind == SubpopulationReport::Kind::None;
  bits.tie = bits.tie_applicable && report.kind() != SubpopulationReport::Kind::None;
  bits.tpr_applicable = kind == SubpopulationReport::Kind::Overall;
  bits.tpr = bits.tpr_applicable && report.kind() == SubpopulationReport::Kind::Overall;
  bits.subset_applicable = kind == SubpopulationReport::Kind::Pairs;
  if (bits.subset_applicable) {
    for (const auto& pair : truth.pairs()) {
      ++bits.tsr_total;
      if (report.contains(pair)) ++bits.tsr_hits;
    }
    for (const auto& pair : eligible) {
      if (truth.contains(pair)) continue;
      ++bits.fsr_total;
      if (report.contains(pair)) ++bits.fsr_hits;
    }
    bits.fnr = report.kind() == SubpopulationReport::Kind::None;
    bits.fpr = report.kind() == SubpopulationReport::Kind::Overall;
  }
  return bits;
}

namespace {

std::vector<double> recorded_times(const ppmx::PpmxData& data) {
  std::vector<double> out;
  for (int i = 0; i < data.n(); ++i)
    if (data.has_outcome(i)) out.push_back(data.time(i));
  return out;
}

ppmx::PosteriorDraws refit(std::span<const Patient> enrolled, const TrialFrame& frame,
                           const TrialConfig& config, std::optional<double> analysis_month,
                           ppmx::McmcConfig mcmc, std::uint64_t seed) {
  ppmx::PpmxData data = ppmx::build_dataset(enrolled, frame,
                                            config.analysis.include_arm_covariate,
                                            analysis_month);
  const ppmx::AnalysisModel model = analysis_model(data, frame, config.analysis);
  mcmc.seed = seed;
  return ppmx::mcmc_run(data, model, mcmc);
}

/// Superiority probabilities for one cohort, shared across patients with
/// identical covariates.
class CohortPi {
 public:
  CohortPi(const ppmx::PosteriorDraws& draws, const TrialFrame& frame, int n_mc, Rng& rng)
      : draws_(draws),
        frame_(frame),
        n_mc_(n_mc),
        rng_(rng),
        engine_(draws.model.hyper, draws.model.cohesion,
                static_cast<int>(draws.draws.front().assignment.size()) + 1) {}

  double pi_for(const Patient& patient) {
    std::string key(reinterpret_cast<const char*>(patient.mutations.entries.data()),
                    patient.mutations.entries.size() * sizeof(int));
    key.append(reinterpret_cast<const char*>(&patient.tumor), sizeof(int));
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double pi = predictive::superiority_prob(draws_, patient, frame_, n_mc_, rng_);
    cache_.emplace(std::move(key), pi);
    return pi;
  }

 private:
  const ppmx::PosteriorDraws& draws_;
  const TrialFrame& frame_;
  int n_mc_;
  Rng& rng_;
  ppmx::SimilarityEngine engine_;
  std::unordered_map<std::string, double> cache_;
};

}  // namespace

RepResult run_trial(const Scenario& scenario, const TrialConfig& config, const TrialFrame& frame,
                    std::uint64_t seed) {
  config.validate();
  scenario.validate(frame);
  const alloc::DesignConfig& design = config.design;
  if (scenario.population.sum() != design.n_max())
    throw std::invalid_argument("population sizes must sum to the trial size");

  RepResult rep;
  rep.seed = seed;

  Rng trial_rng(derive_seed(seed, kStreamTrial));
  std::vector<Patient> patients = sample_population(scenario, frame, trial_rng);
  const int n = static_cast<int>(patients.size());
  for (int i = 0; i < n; ++i)
    patients[i].arrival_month = config.accrual_months * (i + 1.0) / n;

  const alloc::TrialSchedule schedule = alloc::trial_schedule(design);
  std::size_t next_refit = 0;
  std::optional<ppmx::PosteriorDraws> draws;
  std::optional<CohortPi> cohort_pi;
  std::optional<Rng> pi_rng;

  for (int i = 0; i < n; ++i) {
    if (config.adaptive && next_refit < schedule.refit_after.size() &&
        i == schedule.refit_after[next_refit]) {
      const std::optional<double> analysis_month =
          config.censoring ? std::optional<double>(patients[i - 1].arrival_month) : std::nullopt;
      draws = refit(std::span(patients).first(i), frame, config, analysis_month,
                    config.analysis.interim_mcmc, derive_seed(seed, kStreamMcmc, next_refit));
      pi_rng.emplace(derive_seed(seed, kStreamPi, next_refit));
      cohort_pi.emplace(*draws, frame, config.analysis.superiority_mc, *pi_rng);
      ++next_refit;
    }
    Patient& patient = patients[i];
    alloc::AllocationRecord audit;
    Arm arm;
    if (i < design.run_in) {
      arm = alloc::assign_arm(patient, alloc::Phase::RunIn, std::nullopt, design, trial_rng,
                              &audit);
    } else {
      const double pi = config.adaptive ? cohort_pi->pi_for(patient) : 0.5;
      arm = alloc::assign_arm(patient, alloc::Phase::Adaptive, pi, design, trial_rng, &audit);
    }
    patient.arm = arm;
    patient.outcome = Outcome{true_outcome_time(patient, arm, scenario, trial_rng), false};
    rep.audit.push_back(audit);
  }

  // Final analysis after the follow-up window.
  const std::optional<double> final_month =
      config.censoring ? std::optional<double>(config.accrual_months + design.follow_up_months)
                       : std::nullopt;
  ppmx::PpmxData final_data = ppmx::build_dataset(patients, frame,
                                                  config.analysis.include_arm_covariate,
                                                  final_month);
  const ppmx::AnalysisModel model = analysis_model(final_data, frame, config.analysis);
  ppmx::McmcConfig final_mcmc = config.analysis.final_mcmc;
  final_mcmc.seed = derive_seed(seed, kStreamFinal);
  const ppmx::PosteriorDraws final_draws = ppmx::mcmc_run(final_data, model, final_mcmc);

  const predictive::HorizonConfig horizon = predictive::compute_horizon(recorded_times(final_data));
  rep.horizon = horizon.t_months;
  rep.eligible = eligible_pairs(patients, frame, config.utility.min_size);

  const decision::DecisionInputs inputs =
      decision::decision_inputs(final_draws, patients, frame, horizon, config.utility.min_size);
  const decision::ReportResult report = decision::optimal_report(inputs, config.utility);
  rep.report = report.best;
  rep.prob_h0 = report.prob_h0;
  rep.prob_h1 = report.prob_h1;
  const decision::DecisionInputs truth_in =
      decision::truth_inputs(scenario, patients, frame, horizon, config.utility.min_size);
  rep.truth = decision::optimal_report(truth_in, config.utility).best;
  if (config.capture_inputs) {
    rep.posterior_inputs = inputs;
    rep.truth_inputs = truth_in;
  }

  // Per-pair share of patients randomized to the targeted arm.
  rep.alloc_frac = Eigen::MatrixXd::Constant(frame.n_aberrations(), frame.n_tumors(), kNaN);
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    for (int c = 0; c < frame.n_tumors(); ++c) {
      const MutationTumorPair pair{j, c};
      int members = 0, targeted = 0;
      for (const Patient& p : patients) {
        if (!pair_membership(p, pair)) continue;
        ++members;
        if (p.arm == Arm::Targeted) ++targeted;
      }
      if (members > 0)
        rep.alloc_frac(j, c) = static_cast<double>(targeted) / members;
    }
  }

  rep.te = te_metrics_ours(final_draws, rep.report, scenario, frame);
  rep.bits = error_bits(rep.report, rep.truth, rep.eligible);
  return rep;
}

}  // namespace basket::sim
