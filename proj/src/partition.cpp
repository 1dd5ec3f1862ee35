#include "basket/partition.hpp"

#include "basket/math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace basket::ppmx {

void Cluster::set_params(double mu_in, double sigma2_in) {
  if (!(sigma2_in > 0.0)) throw std::invalid_argument("cluster variance must be > 0");
  mu = mu_in;
  sigma2 = sigma2_in;
  loglik_const = -0.5 * (math::kLogTwoPi + std::log(sigma2));
  neg_half_inv_var = -0.5 / sigma2;
}

void PartitionState::add_to_cluster(int i, int j, const PpmxData& data,
                                    const SimilarityHyper& hyper) {
  Cluster& cl = clusters[j];
  ++cl.size;
  for (int col = 0; col < data.p(); ++col) {
    const double v = data.x(i, col);
    if (!std::isnan(v)) cl.cols[col].add(v, hyper.columns[col]);
  }
  if (data.has_outcome(i)) {
    const double ly = log_time(i);
    ++cl.n_y;
    cl.sum_logy += ly;
    cl.sumsq_logy += ly * ly;
  }
  assignment[i] = j;
}

void PartitionState::remove_from_cluster(int i, const PpmxData& data,
                                         const SimilarityHyper& hyper) {
  const int j = assignment[i];
  Cluster& cl = clusters[j];
  --cl.size;
  for (int col = 0; col < data.p(); ++col) {
    const double v = data.x(i, col);
    if (!std::isnan(v)) cl.cols[col].remove(v, hyper.columns[col]);
  }
  if (data.has_outcome(i)) {
    const double ly = log_time(i);
    --cl.n_y;
    cl.sum_logy -= ly;
    cl.sumsq_logy -= ly * ly;
  }
  assignment[i] = -1;
  if (cl.size == 0) {
    clusters.erase(clusters.begin() + j);
    for (int& a : assignment)
      if (a > j) --a;
  }
}

void PartitionState::validate(const PpmxData& data, const SimilarityHyper& hyper) const {
  const int n = data.n();
  if (static_cast<int>(assignment.size()) != n) throw std::runtime_error("assignment size mismatch");
  const int j_max = n_clusters();
  std::vector<int> sizes(j_max, 0);
  for (int i = 0; i < n; ++i) {
    if (assignment[i] < 0 || assignment[i] >= j_max)
      throw std::runtime_error("cluster label out of range");
    ++sizes[assignment[i]];
  }
  for (int j = 0; j < j_max; ++j) {
    if (sizes[j] == 0) throw std::runtime_error("empty cluster in partition");
    if (sizes[j] != clusters[j].size) throw std::runtime_error("cluster size stat out of sync");
    if (!(clusters[j].sigma2 > 0.0)) throw std::runtime_error("nonpositive cluster variance");
  }
  for (int i = 0; i < n; ++i) {
    if (!data.has_outcome(i)) {
      if (!std::isnan(log_time(i))) throw std::runtime_error("log time set for missing outcome");
      continue;
    }
    if (data.censored[i] && log_time(i) < std::log(data.time(i)) - 1e-12)
      throw std::runtime_error("imputed time below censoring bound");
    if (!data.censored[i] && std::fabs(log_time(i) - std::log(data.time(i))) > 1e-12)
      throw std::runtime_error("observed time altered");
  }
  // rebuild covariate stats and compare
  for (int j = 0; j < j_max; ++j) {
    Cluster rebuilt;
    rebuilt.cols.clear();
    for (const auto& spec : hyper.columns) rebuilt.cols.push_back(ColumnStats::empty_for(spec));
    double sum = 0.0, sumsq = 0.0;
    int n_y = 0;
    for (int i = 0; i < n; ++i) {
      if (assignment[i] != j) continue;
      for (int col = 0; col < data.p(); ++col) {
        const double v = data.x(i, col);
        if (!std::isnan(v)) rebuilt.cols[col].add(v, hyper.columns[col]);
      }
      if (data.has_outcome(i)) {
        ++n_y;
        sum += log_time(i);
        sumsq += log_time(i) * log_time(i);
      }
    }
    if (n_y != clusters[j].n_y || std::fabs(sum - clusters[j].sum_logy) > 1e-8 ||
        std::fabs(sumsq - clusters[j].sumsq_logy) > 1e-8)
      throw std::runtime_error("outcome stats out of sync");
    for (int col = 0; col < data.p(); ++col) {
      if (rebuilt.cols[col].n != clusters[j].cols[col].n)
        throw std::runtime_error("covariate stats out of sync");
    }
  }
}

PartitionState initial_state(const PpmxData& data, const AnalysisModel& model) {
  PartitionState state;
  const int n = data.n();
  state.assignment.assign(n, -1);
  state.log_time.resize(n);
  for (int i = 0; i < n; ++i) {
    state.log_time(i) = data.has_outcome(i) ? std::log(data.time(i))
                                            : std::numeric_limits<double>::quiet_NaN();
  }
  if (n == 0) return state;
  Cluster cl;
  for (const auto& spec : model.hyper.columns) cl.cols.push_back(ColumnStats::empty_for(spec));
  cl.set_params(model.outcome_prior.m, model.outcome_prior.s2);
  state.clusters.push_back(std::move(cl));
  for (int i = 0; i < n; ++i) state.add_to_cluster(i, 0, data, model.hyper);
  return state;
}

double partition_log_mass(const std::vector<int>& assignment, const PpmxData& data,
                          const CohesionConfig& cohesion, const SimilarityHyper& hyper) {
  cohesion.validate();
  if (static_cast<int>(assignment.size()) != data.n())
    throw std::invalid_argument("assignment size mismatch");
  int j_max = 0;
  for (int a : assignment) j_max = std::max(j_max, a + 1);
  std::vector<std::vector<ColumnStats>> stats(j_max);
  std::vector<int> sizes(j_max, 0);
  for (int j = 0; j < j_max; ++j)
    for (const auto& spec : hyper.columns) stats[j].push_back(ColumnStats::empty_for(spec));
  for (int i = 0; i < data.n(); ++i) {
    const int j = assignment[i];
    if (j < 0) throw std::invalid_argument("negative cluster label");
    ++sizes[j];
    for (int col = 0; col < data.p(); ++col) {
      const double v = data.x(i, col);
      if (!std::isnan(v)) stats[j][col].add(v, hyper.columns[col]);
    }
  }
  double out = 0.0;
  for (int j = 0; j < j_max; ++j) {
    if (sizes[j] == 0) throw std::invalid_argument("empty cluster in assignment");
    out += std::log(cohesion.mass) + std::lgamma(static_cast<double>(sizes[j]));
    for (int col = 0; col < data.p(); ++col) out += log_similarity(stats[j][col], hyper.columns[col]);
  }
  return out;
}

double partition_log_mass(const PartitionState& state, const PpmxData& data,
                          const CohesionConfig& cohesion, const SimilarityHyper& hyper) {
  return partition_log_mass(state.assignment, data, cohesion, hyper);
}

}  // namespace basket::ppmx
