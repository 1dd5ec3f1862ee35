#include "basket/dataset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace basket::ppmx {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinFollowUp = 1e-9;  // months; below this a patient has no usable outcome
}  // namespace

int PpmxData::n_with_outcome() const {
  int out = 0;
  for (int i = 0; i < n(); ++i)
    if (has_outcome(i)) ++out;
  return out;
}

int PpmxData::n_censored() const {
  int out = 0;
  for (int i = 0; i < n(); ++i)
    if (has_outcome(i) && censored[i]) ++out;
  return out;
}

SimilarityHyper default_similarity_schema(const TrialFrame& frame, double dirichlet_weight,
                                          bool include_arm) {
  if (!(dirichlet_weight > 0.0)) throw std::invalid_argument("dirichlet weight must be > 0");
  SimilarityHyper hyper;
  auto categorical = [&](const std::string& name, int levels) {
    ColumnSpec spec;
    spec.type = CovariateType::Categorical;
    spec.name = name;
    spec.dirichlet = Eigen::VectorXd::Constant(levels, dirichlet_weight);
    return spec;
  };
  for (const auto& a : frame.aberrations) hyper.columns.push_back(categorical(a, 2));
  hyper.columns.push_back(categorical("tumor", frame.n_tumors()));
  if (include_arm) hyper.columns.push_back(categorical("arm", 2));
  return hyper;
}

Eigen::RowVectorXd covariate_row(const Patient& patient, std::optional<Arm> arm,
                                 const TrialFrame& frame, bool include_arm) {
  const int q = frame.n_aberrations();
  Eigen::RowVectorXd row(q + 1 + (include_arm ? 1 : 0));
  for (int j = 0; j < q; ++j) {
    const int v = patient.mutations.entries(j);
    row(j) = v == kNotRecorded ? kNaN : static_cast<double>(v);
  }
  row(q) = static_cast<double>(patient.tumor);
  if (include_arm) {
    if (arm)
      row(q + 1) = static_cast<double>(static_cast<int>(*arm));
    else
      row(q + 1) = kNaN;
  }
  return row;
}

PpmxData build_dataset(std::span<const Patient> patients, const TrialFrame& frame,
                       bool include_arm, std::optional<double> analysis_month) {
  PpmxData data;
  const int n = static_cast<int>(patients.size());
  const int p = frame.n_aberrations() + 1 + (include_arm ? 1 : 0);
  data.x.resize(n, p);
  data.time.resize(n);
  data.censored.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const Patient& pat = patients[i];
    pat.validate(frame);
    data.x.row(i) = covariate_row(pat, pat.arm, frame, include_arm);
    if (!pat.outcome) {
      data.time(i) = kNaN;
      continue;
    }
    double t = pat.outcome->time;
    bool cens = pat.outcome->censored;
    if (analysis_month) {
      const double follow_up = *analysis_month - pat.arrival_month;
      if (follow_up < kMinFollowUp) {
        data.time(i) = kNaN;
        continue;
      }
      if (t > follow_up) {
        t = follow_up;
        cens = true;
      }
    }
    data.time(i) = t;
    data.censored[i] = cens ? 1 : 0;
  }
  return data;
}

NixParams empirical_outcome_prior(const PpmxData& data, double k, double nu) {
  double sum = 0.0, sumsq = 0.0;
  int n = 0;
  const bool any_event = [&] {
    for (int i = 0; i < data.n(); ++i)
      if (data.has_outcome(i) && !data.censored[i]) return true;
    return false;
  }();
  for (int i = 0; i < data.n(); ++i) {
    if (!data.has_outcome(i)) continue;
    if (any_event && data.censored[i]) continue;
    const double ly = std::log(data.time(i));
    sum += ly;
    sumsq += ly * ly;
    ++n;
  }
  NixParams prior;
  prior.k = k;
  prior.nu = nu;
  if (n == 0) {
    prior.m = 0.0;
    prior.s2 = 1.0;
    return prior;
  }
  prior.m = sum / n;
  const double var = n > 1 ? std::max(0.0, (sumsq - n * prior.m * prior.m) / (n - 1)) : 0.0;
  prior.s2 = std::max(var, 1e-4);
  return prior;
}

}  // namespace basket::ppmx
