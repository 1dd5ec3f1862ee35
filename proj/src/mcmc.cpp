#include "basket/mcmc.hpp"

#include "basket/math.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace basket::ppmx {

void McmcConfig::validate() const {
  if (iterations <= burn_in) throw std::invalid_argument("iterations must exceed burn_in");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
}

void impute_censored(PartitionState& state, const PpmxData& data, Rng& rng) {
  for (int i = 0; i < data.n(); ++i) {
    if (!data.has_outcome(i) || !data.censored[i]) continue;
    Cluster& cl = state.clusters[state.assignment[i]];
    const double bound = std::log(data.time(i));
    const double old_logy = state.log_time(i);
    const double new_logy = rng.truncated_normal_lower(cl.mu, std::sqrt(cl.sigma2), bound);
    cl.sum_logy += new_logy - old_logy;
    cl.sumsq_logy += new_logy * new_logy - old_logy * old_logy;
    state.log_time(i) = new_logy;
  }
}

namespace {

/// Prior-predictive log density of one log time under the NIX base measure:
/// a scaled t with nu df, location m and scale^2 = s2 * (1 + 1/k).
double new_cluster_log_lik(double logy, const NixParams& prior) {
  return math::student_t_logpdf(logy, prior.nu, prior.m,
                                std::sqrt(prior.s2 * (1.0 + 1.0 / prior.k)));
}

}  // namespace

Eigen::ArrayXd reassign_log_weights(const PartitionState& state, int i, const PpmxData& data,
                                    const AnalysisModel& model, const SimilarityEngine& engine) {
  const int j_max = state.n_clusters();
  Eigen::ArrayXd logw(j_max + 1);
  const bool has_y = data.has_outcome(i);
  const double logy = has_y ? state.log_time(i) : 0.0;
  for (int j = 0; j < j_max; ++j) {
    const Cluster& cl = state.clusters[j];
    double w = engine.log_size(cl.size);
    for (int col = 0; col < data.p(); ++col) {
      const double v = data.x(i, col);
      if (!std::isnan(v)) w += engine.log_ratio_add(col, cl.cols[col], v);
    }
    if (has_y) w += cl.log_lik(logy);
    logw(j) = w;
  }
  double w_new = engine.log_mass();
  for (int col = 0; col < data.p(); ++col) {
    const double v = data.x(i, col);
    if (!std::isnan(v)) w_new += engine.log_singleton(col, v);
  }
  if (has_y) w_new += new_cluster_log_lik(logy, model.outcome_prior);
  logw(j_max) = w_new;
  return logw;
}

namespace {

void draw_cluster_params(Cluster& cl, const NixParams& prior, Rng& rng) {
  const NixParams post = nix_posterior(prior, cl.n_y, cl.sum_logy, cl.sumsq_logy);
  const double sigma2 = rng.scaled_inv_chisq(post.nu, post.s2);
  const double mu = rng.normal(post.m, std::sqrt(sigma2 / post.k));
  cl.set_params(mu, sigma2);
}

}  // namespace

void gibbs_reassign(PartitionState& state, int i, const PpmxData& data, const AnalysisModel& model,
                    const SimilarityEngine& engine, Rng& rng) {
  state.remove_from_cluster(i, data, model.hyper);
  const Eigen::ArrayXd logw = reassign_log_weights(state, i, data, model, engine);
  const int j = rng.categorical_from_log(logw);
  if (j == state.n_clusters()) {
    Cluster cl;
    for (const auto& spec : model.hyper.columns) cl.cols.push_back(ColumnStats::empty_for(spec));
    cl.set_params(model.outcome_prior.m, model.outcome_prior.s2);
    state.clusters.push_back(std::move(cl));
    state.add_to_cluster(i, j, data, model.hyper);
    draw_cluster_params(state.clusters[j], model.outcome_prior, rng);
  } else {
    state.add_to_cluster(i, j, data, model.hyper);
  }
}

void update_cluster_params(PartitionState& state, int j, const AnalysisModel& model, Rng& rng) {
  if (j < 0 || j >= state.n_clusters()) throw std::invalid_argument("cluster index out of range");
  if (state.clusters[j].size == 0) throw std::invalid_argument("cluster is empty");
  draw_cluster_params(state.clusters[j], model.outcome_prior, rng);
}

PosteriorDraws mcmc_run(const PpmxData& data, const AnalysisModel& model,
                        const McmcConfig& config) {
  config.validate();
  model.hyper.validate();
  model.cohesion.validate();
  model.outcome_prior.validate();
  if (data.n() == 0) throw std::invalid_argument("mcmc_run: empty dataset");
  if (data.p() != model.hyper.n_columns())
    throw std::invalid_argument("mcmc_run: covariate schema mismatch");

  const SimilarityEngine engine(model.hyper, model.cohesion, data.n());
  Rng rng(config.seed);
  PartitionState state = initial_state(data, model);

  PosteriorDraws out;
  out.model = model;
  out.seed = config.seed;
  out.iterations = config.iterations;
  out.burn_in = config.burn_in;
  out.thin = config.thin;
  out.draws.reserve(config.n_draws());

  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    impute_censored(state, data, rng);
    for (int i = 0; i < data.n(); ++i) gibbs_reassign(state, i, data, model, engine, rng);
    for (int j = 0; j < state.n_clusters(); ++j) draw_cluster_params(state.clusters[j],
                                                                     model.outcome_prior, rng);
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thin == 0)
      out.draws.push_back(state);
  }
  return out;
}

void write_draws(std::ostream& out, const PosteriorDraws& draws) {
  out << "draw,cluster,size,mu,sigma2\n";
  char buf[96];
  for (int d = 0; d < draws.n_draws(); ++d) {
    const PartitionState& s = draws.draws[d];
    for (int j = 0; j < s.n_clusters(); ++j) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g\n", d, j, s.clusters[j].size,
                    s.clusters[j].mu, s.clusters[j].sigma2);
      out << buf;
    }
  }
}

}  // namespace basket::ppmx
