#include "basket/comparators.hpp"

#include "basket/dataset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace basket::sim {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void NigPrior::validate() const {
  if (!(lambda > 0.0) || !(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("NigPrior: lambda, shape, rate must be > 0");
}

NigPosterior NigPosterior::update(const NigPrior& prior, std::span<const double> log_times) {
  prior.validate();
  const int n = static_cast<int>(log_times.size());
  double sum = 0.0, sumsq = 0.0;
  for (double v : log_times) {
    sum += v;
    sumsq += v * v;
  }
  NigPosterior post;
  post.n = n;
  post.lambda_n = prior.lambda + n;
  post.mu_n = (prior.lambda * prior.mu0 + sum) / post.lambda_n;
  post.shape_n = prior.shape + 0.5 * n;
  const double mean = n > 0 ? sum / n : 0.0;
  const double ss = n > 0 ? std::max(0.0, sumsq - n * mean * mean) : 0.0;
  const double dev = mean - prior.mu0;
  post.rate_n = prior.rate + 0.5 * ss + 0.5 * prior.lambda * n / post.lambda_n * dev * dev;
  return post;
}

double NigPosterior::mean_event_time() const {
  const double var = shape_n > 1.0 ? rate_n / (shape_n - 1.0) : rate_n / shape_n;
  return std::exp(mu_n + 0.5 * var);
}

namespace {

std::vector<double> arm_log_times(std::span<const Patient> patients, Arm z) {
  std::vector<double> out;
  for (const Patient& p : patients) {
    if (!p.arm || *p.arm != z || !p.outcome) continue;
    out.push_back(std::log(p.outcome->time));
  }
  return out;
}

}  // namespace

ComparatorPosterior naive_fit(std::span<const Patient> patients, const NigPrior& prior) {
  const auto other = arm_log_times(patients, Arm::Other);
  const auto targeted = arm_log_times(patients, Arm::Targeted);
  if (other.empty() || targeted.empty())
    throw std::invalid_argument("naive_fit: an arm has no observed outcomes");
  return ComparatorPosterior{NigPosterior::update(prior, other),
                             NigPosterior::update(prior, targeted)};
}

std::vector<std::optional<ComparatorPosterior>> separate_fit(std::span<const Patient> patients,
                                                             const TrialFrame& frame,
                                                             const NigPrior& prior) {
  std::vector<std::optional<ComparatorPosterior>> out(frame.n_aberrations());
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    std::vector<Patient> stratum;
    for (const Patient& p : patients)
      if (p.mutations.entries(j) == 1) stratum.push_back(p);
    try {
      out[j] = naive_fit(stratum, prior);
    } catch (const std::invalid_argument&) {
      out[j] = std::nullopt;  // inestimable stratum
    }
  }
  return out;
}

Patient canonical_patient(const MutationTumorPair& pair, const TrialFrame& frame) {
  Patient p;
  p.mutations.entries = Eigen::VectorXi::Zero(frame.n_aberrations());
  p.mutations.entries(pair.aberration) = 1;
  p.tumor = pair.tumor;
  return p;
}

namespace {

TeMetrics empty_metrics(const TrialFrame& frame) {
  TeMetrics m;
  m.abs_error = Eigen::MatrixXd::Constant(frame.n_aberrations(), frame.n_tumors(), kNaN);
  m.te_est = m.abs_error;
  m.te_true = m.abs_error;
  return m;
}

void fill_cell(TeMetrics& m, const MutationTumorPair& pair, double est, const Scenario& scenario,
               const TrialFrame& frame, Arm chosen) {
  const Patient x = canonical_patient(pair, frame);
  const double truth = true_mean_event_time(scenario, x, chosen);
  m.te_est(pair.aberration, pair.tumor) = est;
  m.te_true(pair.aberration, pair.tumor) = truth;
  m.abs_error(pair.aberration, pair.tumor) = std::fabs(est - truth);
}

}  // namespace

TeMetrics te_metrics_ours(const ppmx::PosteriorDraws& draws, const SubpopulationReport& report,
                          const Scenario& scenario, const TrialFrame& frame) {
  TeMetrics m = empty_metrics(frame);
  const ppmx::SimilarityEngine engine(
      draws.model.hyper, draws.model.cohesion,
      draws.draws.empty() ? 2 : static_cast<int>(draws.draws.front().assignment.size()) + 1);
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    for (int c = 0; c < frame.n_tumors(); ++c) {
      const MutationTumorPair pair{j, c};
      const bool in_report = report.kind() == SubpopulationReport::Kind::Overall ||
                             report.contains(pair);
      const Arm chosen = in_report ? Arm::Targeted : Arm::Other;
      const Patient x = canonical_patient(pair, frame);
      const Eigen::RowVectorXd row =
          ppmx::covariate_row(x, chosen, frame, draws.model.include_arm);
      double est = 0.0;
      for (const auto& d : draws.draws) {
        const Eigen::ArrayXd w = predictive::membership_weights(d, row, draws.model, engine);
        est += predictive::mean_event_time(d, w, draws.model);
      }
      est /= draws.n_draws();
      fill_cell(m, pair, est, scenario, frame, chosen);
    }
  }
  return m;
}

TeMetrics te_metrics_naive(const ComparatorPosterior& fit, const Scenario& scenario,
                           const TrialFrame& frame) {
  TeMetrics m = empty_metrics(frame);
  const double est_other = fit.other.mean_event_time();
  const double est_targeted = fit.targeted.mean_event_time();
  const Arm chosen = est_targeted > est_other ? Arm::Targeted : Arm::Other;
  const double est = std::max(est_targeted, est_other);
  for (int j = 0; j < frame.n_aberrations(); ++j)
    for (int c = 0; c < frame.n_tumors(); ++c)
      fill_cell(m, MutationTumorPair{j, c}, est, scenario, frame, chosen);
  return m;
}

TeMetrics te_metrics_separate(std::span<const std::optional<ComparatorPosterior>> fits,
                              const Scenario& scenario, const TrialFrame& frame) {
  TeMetrics m = empty_metrics(frame);
  if (static_cast<int>(fits.size()) != frame.n_aberrations())
    throw std::invalid_argument("te_metrics_separate: one fit per aberration required");
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    if (!fits[j]) continue;  // inestimable marker propagates as NaN
    const double est_other = fits[j]->other.mean_event_time();
    const double est_targeted = fits[j]->targeted.mean_event_time();
    const Arm chosen = est_targeted > est_other ? Arm::Targeted : Arm::Other;
    const double est = std::max(est_targeted, est_other);
    for (int c = 0; c < frame.n_tumors(); ++c)
      fill_cell(m, MutationTumorPair{j, c}, est, scenario, frame, chosen);
  }
  return m;
}

}  // namespace basket::sim
