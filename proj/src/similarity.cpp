#include "basket/similarity.hpp"

#include "basket/math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace basket::ppmx {

void NixParams::validate() const {
  if (!(k > 0.0) || !(nu > 0.0) || !(s2 > 0.0))
    throw std::invalid_argument("NixParams: k, nu, s2 must be > 0");
}

void GammaHyper::validate() const {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("GammaHyper: shape and rate must be > 0");
}

void ColumnSpec::validate() const {
  switch (type) {
    case CovariateType::Categorical:
      if (dirichlet.size() < 2) throw std::invalid_argument("categorical column needs >= 2 levels");
      if ((dirichlet.array() <= 0.0).any())
        throw std::invalid_argument("Dirichlet weights must be > 0");
      break;
    case CovariateType::Continuous:
      nix.validate();
      break;
    case CovariateType::Count:
      gamma.validate();
      break;
  }
}

void SimilarityHyper::validate() const {
  for (const auto& c : columns) c.validate();
}

void CohesionConfig::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("cohesion mass must be > 0");
}

ColumnStats ColumnStats::empty_for(const ColumnSpec& spec) {
  ColumnStats s;
  if (spec.type == CovariateType::Categorical) s.counts.assign(spec.levels(), 0);
  return s;
}

void ColumnStats::add(double value, const ColumnSpec& spec) {
  ++n;
  switch (spec.type) {
    case CovariateType::Categorical: {
      const int v = static_cast<int>(value);
      if (v < 0 || v >= spec.levels()) throw std::invalid_argument("category out of range");
      ++counts[v];
      break;
    }
    case CovariateType::Continuous:
      sum += value;
      sumsq += value * value;
      break;
    case CovariateType::Count: {
      if (value < 0.0) throw std::invalid_argument("count covariate must be nonnegative");
      sum += value;
      sum_lgamma += std::lgamma(value + 1.0);
      break;
    }
  }
}

void ColumnStats::remove(double value, const ColumnSpec& spec) {
  --n;
  switch (spec.type) {
    case CovariateType::Categorical:
      --counts[static_cast<int>(value)];
      break;
    case CovariateType::Continuous:
      sum -= value;
      sumsq -= value * value;
      break;
    case CovariateType::Count:
      sum -= value;
      sum_lgamma -= std::lgamma(value + 1.0);
      break;
  }
}

NixParams nix_posterior(const NixParams& prior, int n, double sum, double sumsq) {
  if (n == 0) return prior;
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double ss = std::max(0.0, sumsq - nn * mean * mean);
  NixParams post;
  post.k = prior.k + nn;
  post.m = (prior.k * prior.m + nn * mean) / post.k;
  post.nu = prior.nu + nn;
  const double dev = mean - prior.m;
  post.s2 = (prior.nu * prior.s2 + ss + prior.k * nn / post.k * dev * dev) / post.nu;
  return post;
}

namespace {

double log_marginal_categorical(const std::vector<int>& counts, const Eigen::VectorXd& alpha,
                                int n) {
  if (n == 0) return 0.0;
  const double total = alpha.sum();
  double out = std::lgamma(total) - std::lgamma(total + n);
  for (int r = 0; r < alpha.size(); ++r) {
    if (counts[r] > 0) out += std::lgamma(alpha(r) + counts[r]) - std::lgamma(alpha(r));
  }
  return out;
}

double log_marginal_continuous(int n, double sum, double sumsq, const NixParams& p) {
  if (n == 0) return 0.0;
  const NixParams post = nix_posterior(p, n, sum, sumsq);
  return -0.5 * n * std::log(2.0 * M_PI) + 0.5 * (std::log(p.k) - std::log(post.k)) +
         std::lgamma(0.5 * post.nu) - std::lgamma(0.5 * p.nu) +
         0.5 * p.nu * std::log(0.5 * p.nu * p.s2) - 0.5 * post.nu * std::log(0.5 * post.nu * post.s2);
}

double log_marginal_count(int n, double sum, double sum_lgamma, const GammaHyper& g) {
  if (n == 0) return 0.0;
  return g.shape * std::log(g.rate) - std::lgamma(g.shape) + std::lgamma(g.shape + sum) -
         (g.shape + sum) * std::log(g.rate + n) - sum_lgamma;
}

}  // namespace

double log_similarity(const ColumnStats& stats, const ColumnSpec& spec) {
  switch (spec.type) {
    case CovariateType::Categorical:
      return log_marginal_categorical(stats.counts, spec.dirichlet, stats.n);
    case CovariateType::Continuous:
      return log_marginal_continuous(stats.n, stats.sum, stats.sumsq, spec.nix);
    case CovariateType::Count:
      return log_marginal_count(stats.n, stats.sum, stats.sum_lgamma, spec.gamma);
  }
  return 0.0;
}

double similarity_categorical(const std::vector<int>& values, const Eigen::VectorXd& dirichlet) {
  std::vector<int> counts(dirichlet.size(), 0);
  for (int v : values) {
    if (v < 0 || v >= dirichlet.size()) throw std::invalid_argument("category out of range");
    ++counts[v];
  }
  return std::exp(log_marginal_categorical(counts, dirichlet, static_cast<int>(values.size())));
}

double similarity_continuous(const std::vector<double>& values, const NixParams& hyper) {
  hyper.validate();
  double sum = 0.0, sumsq = 0.0;
  for (double v : values) {
    sum += v;
    sumsq += v * v;
  }
  return std::exp(log_marginal_continuous(static_cast<int>(values.size()), sum, sumsq, hyper));
}

double similarity_count(const std::vector<int>& values, const GammaHyper& hyper) {
  hyper.validate();
  double sum = 0.0, slg = 0.0;
  for (int v : values) {
    if (v < 0) throw std::invalid_argument("count covariate must be nonnegative");
    sum += v;
    slg += std::lgamma(v + 1.0);
  }
  return std::exp(log_marginal_count(static_cast<int>(values.size()), sum, slg, hyper));
}

double product_similarity(const Eigen::MatrixXd& rows, const SimilarityHyper& hyper) {
  if (rows.cols() != hyper.n_columns())
    throw std::invalid_argument("product_similarity: column count mismatch");
  double log_g = 0.0;
  for (int col = 0; col < rows.cols(); ++col) {
    const ColumnSpec& spec = hyper.columns[col];
    ColumnStats stats = ColumnStats::empty_for(spec);
    for (int i = 0; i < rows.rows(); ++i) {
      const double v = rows(i, col);
      if (!std::isnan(v)) stats.add(v, spec);
    }
    log_g += log_similarity(stats, spec);
  }
  return std::exp(log_g);
}

double similarity_bayes_identity_categorical(const std::vector<int>& values,
                                             const Eigen::VectorXd& dirichlet,
                                             const Eigen::VectorXd& probe) {
  if (probe.size() != dirichlet.size())
    throw std::invalid_argument("probe dimension mismatch");
  if ((probe.array() <= 0.0).any() || std::fabs(probe.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("probe must be an interior probability vector");
  Eigen::VectorXd post = dirichlet;
  double log_lik = 0.0;
  for (int v : values) {
    if (v < 0 || v >= dirichlet.size()) throw std::invalid_argument("category out of range");
    log_lik += std::log(probe(v));
    post(v) += 1.0;
  }
  auto log_dirichlet = [](const Eigen::VectorXd& a, const Eigen::VectorXd& x) {
    double out = std::lgamma(a.sum());
    for (int r = 0; r < a.size(); ++r) out += -std::lgamma(a(r)) + (a(r) - 1.0) * std::log(x(r));
    return out;
  };
  return std::exp(log_lik + log_dirichlet(dirichlet, probe) - log_dirichlet(post, probe));
}

double similarity_bayes_identity_count(const std::vector<int>& values, const GammaHyper& hyper,
                                       double probe_rate) {
  if (!(probe_rate > 0.0)) throw std::invalid_argument("probe rate must be > 0");
  hyper.validate();
  double log_lik = 0.0;
  double sum = 0.0;
  for (int v : values) {
    if (v < 0) throw std::invalid_argument("count covariate must be nonnegative");
    log_lik += v * std::log(probe_rate) - probe_rate - std::lgamma(v + 1.0);
    sum += v;
  }
  auto log_gamma_pdf = [](double shape, double rate, double x) {
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
  };
  const double n = static_cast<double>(values.size());
  return std::exp(log_lik + log_gamma_pdf(hyper.shape, hyper.rate, probe_rate) -
                  log_gamma_pdf(hyper.shape + sum, hyper.rate + n, probe_rate));
}

double similarity_bayes_identity_continuous(const std::vector<double>& values,
                                            const NixParams& hyper, double probe_mu,
                                            double probe_var) {
  if (!(probe_var > 0.0)) throw std::invalid_argument("probe variance must be > 0");
  hyper.validate();
  double sum = 0.0, sumsq = 0.0, log_lik = 0.0;
  for (double v : values) {
    sum += v;
    sumsq += v * v;
    log_lik += math::normal_logpdf(v, probe_mu, probe_var);
  }
  // log NIX density of (mu, v) under parameters p.
  auto log_nix = [](const NixParams& p, double mu, double v) {
    const double half_nu = 0.5 * p.nu;
    const double log_invchisq = half_nu * std::log(half_nu * p.s2) - std::lgamma(half_nu) -
                                (half_nu + 1.0) * std::log(v) - half_nu * p.s2 / v;
    return log_invchisq + math::normal_logpdf(mu, p.m, v / p.k);
  };
  const NixParams post = nix_posterior(hyper, static_cast<int>(values.size()), sum, sumsq);
  return std::exp(log_lik + log_nix(hyper, probe_mu, probe_var) - log_nix(post, probe_mu, probe_var));
}

SimilarityEngine::SimilarityEngine(SimilarityHyper hyper, CohesionConfig cohesion,
                                   int max_cluster_size)
    : hyper_(std::move(hyper)), cohesion_(cohesion) {
  hyper_.validate();
  cohesion_.validate();
  log_mass_ = std::log(cohesion_.mass);
  const int table = std::max(2, max_cluster_size + 2);
  log_int_.resize(table);
  log_int_[0] = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < table; ++k) log_int_[k] = std::log(static_cast<double>(k));
  cat_level_.resize(hyper_.n_columns());
  cat_total_.resize(hyper_.n_columns());
  for (int col = 0; col < hyper_.n_columns(); ++col) {
    const ColumnSpec& spec = hyper_.columns[col];
    if (spec.type != CovariateType::Categorical) continue;
    cat_level_[col].resize(spec.levels());
    for (int r = 0; r < spec.levels(); ++r) {
      cat_level_[col][r].resize(table);
      for (int n = 0; n < table; ++n) cat_level_[col][r][n] = std::log(spec.dirichlet(r) + n);
    }
    cat_total_[col].resize(table);
    const double total = spec.dirichlet.sum();
    for (int n = 0; n < table; ++n) cat_total_[col][n] = std::log(total + n);
  }
}

double SimilarityEngine::log_ratio_add(int col, const ColumnStats& stats, double value) const {
  const ColumnSpec& spec = hyper_.columns[col];
  switch (spec.type) {
    case CovariateType::Categorical: {
      const int v = static_cast<int>(value);
      const int nv = stats.counts[v];
      const auto& lv = cat_level_[col][v];
      const auto& lt = cat_total_[col];
      if (nv < static_cast<int>(lv.size()) && stats.n < static_cast<int>(lt.size()))
        return lv[nv] - lt[stats.n];
      return std::log(spec.dirichlet(v) + nv) - std::log(spec.dirichlet.sum() + stats.n);
    }
    case CovariateType::Continuous: {
      const double base = log_marginal_continuous(stats.n, stats.sum, stats.sumsq, spec.nix);
      const double grown = log_marginal_continuous(stats.n + 1, stats.sum + value,
                                                   stats.sumsq + value * value, spec.nix);
      return grown - base;
    }
    case CovariateType::Count: {
      const GammaHyper& g = spec.gamma;
      const double a = g.shape + stats.sum;
      return std::lgamma(a + value) - std::lgamma(a) + a * std::log(g.rate + stats.n) -
             (a + value) * std::log(g.rate + stats.n + 1) - std::lgamma(value + 1.0);
    }
  }
  return 0.0;
}

double SimilarityEngine::log_singleton(int col, double value) const {
  const ColumnSpec& spec = hyper_.columns[col];
  ColumnStats stats = ColumnStats::empty_for(spec);
  return log_ratio_add(col, stats, value);
}

double SimilarityEngine::log_size(int size) const {
  if (size < static_cast<int>(log_int_.size())) return log_int_[size];
  return std::log(static_cast<double>(size));
}

}  // namespace basket::ppmx
