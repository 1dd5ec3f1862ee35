#include "basket/predictive.hpp"

#include "basket/dataset.hpp"
#include "basket/math.hpp"

#include <cmath>
#include <stdexcept>

namespace basket::predictive {

namespace {
constexpr double kSurvivalFloor = 1e-15;
}

void HorizonConfig::validate() const {
  if (!(t_months > 0.0)) throw std::invalid_argument("horizon must be > 0");
}

HorizonConfig compute_horizon(std::span<const double> observed_times) {
  if (observed_times.empty()) throw std::invalid_argument("compute_horizon: no observed times");
  return HorizonConfig{math::empirical_quantile(observed_times, 0.75)};
}

void PredictiveMixture::validate() const {
  double total = new_weight;
  for (const auto& c : components) {
    if (c.weight < 0.0 || !(c.sigma2 > 0.0))
      throw std::invalid_argument("invalid mixture component");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("mixture weights must sum to 1");
}

Eigen::ArrayXd membership_weights(const PartitionState& draw, const Eigen::RowVectorXd& x,
                                  const AnalysisModel& model, const SimilarityEngine& engine) {
  const int j_max = draw.n_clusters();
  if (x.size() != model.hyper.n_columns())
    throw std::invalid_argument("membership_weights: query row length mismatch");
  Eigen::ArrayXd logw(j_max + 1);
  for (int j = 0; j < j_max; ++j) {
    const ppmx::Cluster& cl = draw.clusters[j];
    double w = engine.log_size(cl.size);
    for (int col = 0; col < x.size(); ++col) {
      const double v = x(col);
      if (!std::isnan(v)) w += engine.log_ratio_add(col, cl.cols[col], v);
    }
    logw(j) = w;
  }
  double w_new = engine.log_mass();
  for (int col = 0; col < x.size(); ++col) {
    const double v = x(col);
    if (!std::isnan(v)) w_new += engine.log_singleton(col, v);
  }
  logw(j_max) = w_new;
  const double norm = math::log_sum_exp(logw);
  return (logw - norm).exp();
}

PredictiveMixture mixture_for(const PartitionState& draw, const Eigen::RowVectorXd& x,
                              const AnalysisModel& model, const SimilarityEngine& engine) {
  const Eigen::ArrayXd w = membership_weights(draw, x, model, engine);
  PredictiveMixture mix;
  mix.components.resize(draw.n_clusters());
  for (int j = 0; j < draw.n_clusters(); ++j) {
    mix.components[j] = {w(j), draw.clusters[j].mu, draw.clusters[j].sigma2};
  }
  mix.new_weight = w(draw.n_clusters());
  mix.prior = model.outcome_prior;
  return mix;
}

double survival(const PredictiveMixture& mix, double t) {
  if (t < 0.0) throw std::invalid_argument("survival: t must be >= 0");
  if (t == 0.0) return 1.0;
  const double lt = std::log(t);
  double s = 0.0;
  for (const auto& c : mix.components) {
    if (c.weight == 0.0) continue;
    s += c.weight * math::normal_sf((lt - c.mu) / std::sqrt(c.sigma2));
  }
  if (mix.new_weight > 0.0) {
    const double scale = std::sqrt(mix.prior.s2 * (1.0 + 1.0 / mix.prior.k));
    s += mix.new_weight * math::student_t_sf((lt - mix.prior.m) / scale, mix.prior.nu);
  }
  return s;
}

double cumulative_hazard(const PredictiveMixture& mix, double t) {
  const double s = std::max(survival(mix, t), kSurvivalFloor);
  return -std::log(s);
}

double average_hazard(const PredictiveMixture& mix, const HorizonConfig& horizon) {
  horizon.validate();
  return cumulative_hazard(mix, horizon.t_months) / horizon.t_months;
}

double sample_event_time(const PredictiveMixture& mix, Rng& rng) {
  Eigen::ArrayXd w(mix.components.size() + 1);
  for (std::size_t j = 0; j < mix.components.size(); ++j) w(j) = mix.components[j].weight;
  w(mix.components.size()) = mix.new_weight;
  const int j = rng.categorical(w);
  double mu, sigma2;
  if (j < static_cast<int>(mix.components.size())) {
    mu = mix.components[j].mu;
    sigma2 = mix.components[j].sigma2;
  } else {
    sigma2 = rng.scaled_inv_chisq(mix.prior.nu, mix.prior.s2);
    mu = rng.normal(mix.prior.m, std::sqrt(sigma2 / mix.prior.k));
  }
  return std::exp(rng.normal(mu, std::sqrt(sigma2)));
}

double mean_event_time(const PartitionState& draw, const Eigen::ArrayXd& weights,
                       const AnalysisModel& model) {
  const int j_max = draw.n_clusters();
  double out = 0.0;
  for (int j = 0; j < j_max; ++j) {
    const ppmx::Cluster& cl = draw.clusters[j];
    const NixParams post =
        ppmx::nix_posterior(model.outcome_prior, cl.n_y, cl.sum_logy, cl.sumsq_logy);
    const double var = post.nu > 2.0 ? post.nu * post.s2 / (post.nu - 2.0) : post.s2;
    out += weights(j) * std::exp(post.m + 0.5 * var);
  }
  out += weights(j_max) * std::exp(model.outcome_prior.m + 0.5 * model.outcome_prior.s2);
  return out;
}

namespace {

SimilarityEngine engine_for(const PosteriorDraws& draws) {
  int max_size = 1;
  if (!draws.draws.empty()) max_size = static_cast<int>(draws.draws.front().assignment.size());
  return SimilarityEngine(draws.model.hyper, draws.model.cohesion, max_size + 1);
}

}  // namespace

std::vector<PredictiveMixture> mixtures_for_row(const PosteriorDraws& draws,
                                                const Eigen::RowVectorXd& x,
                                                const SimilarityEngine& engine) {
  std::vector<PredictiveMixture> out;
  out.reserve(draws.n_draws());
  for (const auto& d : draws.draws) out.push_back(mixture_for(d, x, draws.model, engine));
  return out;
}

double survival(const PosteriorDraws& draws, int draw_index, double t, const Patient& patient,
                Arm z, const TrialFrame& frame) {
  const SimilarityEngine engine = engine_for(draws);
  const Eigen::RowVectorXd x = ppmx::covariate_row(patient, z, frame, draws.model.include_arm);
  return survival(mixture_for(draws.draws.at(draw_index), x, draws.model, engine), t);
}

double average_hazard(const PosteriorDraws& draws, int draw_index, const Patient& patient, Arm z,
                      const TrialFrame& frame, const HorizonConfig& horizon) {
  const SimilarityEngine engine = engine_for(draws);
  const Eigen::RowVectorXd x = ppmx::covariate_row(patient, z, frame, draws.model.include_arm);
  return average_hazard(mixture_for(draws.draws.at(draw_index), x, draws.model, engine), horizon);
}

double subgroup_average_hazard(const PosteriorDraws& draws, int draw_index,
                               const MutationTumorPair& pair, Arm z,
                               std::span<const Patient> patients, const TrialFrame& frame,
                               const HorizonConfig& horizon) {
  const SimilarityEngine engine = engine_for(draws);
  const PartitionState& draw = draws.draws.at(draw_index);
  double total = 0.0;
  int count = 0;
  for (const Patient& p : patients) {
    if (!pair_membership(p, pair)) continue;
    const Eigen::RowVectorXd x = ppmx::covariate_row(p, z, frame, draws.model.include_arm);
    total += average_hazard(mixture_for(draw, x, draws.model, engine), horizon);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("subgroup_average_hazard: empty subgroup");
  return total / count;
}

double hazard_ratio(const PosteriorDraws& draws, int draw_index, const MutationTumorPair& pair,
                    std::span<const Patient> patients, const TrialFrame& frame,
                    const HorizonConfig& horizon) {
  const double ah_other = subgroup_average_hazard(draws, draw_index, pair, Arm::Other, patients,
                                                  frame, horizon);
  const double ah_targeted = subgroup_average_hazard(draws, draw_index, pair, Arm::Targeted,
                                                     patients, frame, horizon);
  if (ah_other == 0.0 && ah_targeted == 0.0) return 1.0;  // no evidence of a difference
  return ah_other / ah_targeted;
}

std::vector<double> predictive_sample(const PosteriorDraws& draws, const Patient& patient, Arm z,
                                      const TrialFrame& frame, int n_samples, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("predictive_sample: n_samples must be >= 1");
  if (draws.n_draws() == 0) throw std::invalid_argument("predictive_sample: no posterior draws");
  const SimilarityEngine engine = engine_for(draws);
  const Eigen::RowVectorXd x = ppmx::covariate_row(patient, z, frame, draws.model.include_arm);
  const std::vector<PredictiveMixture> mixes = mixtures_for_row(draws, x, engine);
  std::vector<double> out(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    const int d = rng.uniform_int(static_cast<int>(mixes.size()));
    out[s] = sample_event_time(mixes[d], rng);
  }
  return out;
}

double superiority_prob(std::span<const PredictiveMixture> mix_other,
                        std::span<const PredictiveMixture> mix_targeted, int n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("superiority_prob: n_mc must be >= 1");
  if (mix_other.size() != mix_targeted.size() || mix_other.empty())
    throw std::invalid_argument("superiority_prob: mismatched or empty mixtures");
  int wins = 0;
  for (int s = 0; s < n_mc; ++s) {
    const int d = rng.uniform_int(static_cast<int>(mix_other.size()));
    const double y_targeted = sample_event_time(mix_targeted[d], rng);
    const double y_other = sample_event_time(mix_other[d], rng);
    if (y_targeted > y_other) ++wins;
  }
  return static_cast<double>(wins) / n_mc;
}

double superiority_prob(const PosteriorDraws& draws, const Patient& patient,
                        const TrialFrame& frame, int n_mc, Rng& rng) {
  const SimilarityEngine engine = engine_for(draws);
  const Eigen::RowVectorXd x_other =
      ppmx::covariate_row(patient, Arm::Other, frame, draws.model.include_arm);
  const Eigen::RowVectorXd x_targeted =
      ppmx::covariate_row(patient, Arm::Targeted, frame, draws.model.include_arm);
  const auto mix_other = mixtures_for_row(draws, x_other, engine);
  const auto mix_targeted = mixtures_for_row(draws, x_targeted, engine);
  return superiority_prob(mix_other, mix_targeted, n_mc, rng);
}

}  // namespace basket::predictive
