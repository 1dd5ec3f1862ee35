#include "basket/decision.hpp"

#include "basket/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace basket::decision {

void UtilityConfig::validate() const {
  if (!(u0 > 0.0) || !(u1 > 0.0)) throw std::invalid_argument("u0 and u1 must be > 0");
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0,1]");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (min_size < 1) throw std::invalid_argument("min_size must be >= 1");
  if (!(eps0 > 0.0) || !(eps1 > 0.0)) throw std::invalid_argument("eps0 and eps1 must be > 0");
}

double size_penalty(int n_a, double alpha, int min_size) {
  if (n_a < 0) throw std::invalid_argument("subgroup size must be >= 0");
  if (n_a < min_size) return 0.0;
  return std::pow(static_cast<double>(n_a), alpha);
}

void DecisionInputs::validate() const {
  if (static_cast<int>(pairs.size()) != log_hr.cols() || subgroup_sizes.size() != log_hr.cols())
    throw std::invalid_argument("DecisionInputs: shape mismatch");
  if (log_hr.rows() < 1) throw std::invalid_argument("DecisionInputs: needs at least one draw");
}

bool h0_member(const Eigen::RowVectorXd& log_hr_row, double eps0) {
  if (log_hr_row.size() == 0) return true;
  return log_hr_row.array().abs().maxCoeff() <= eps0;
}

bool h1_member(const Eigen::RowVectorXd& log_hr_row, double eps0, double eps1) {
  if (log_hr_row.size() == 0) return false;
  const double lo = log_hr_row.minCoeff();
  const double hi = log_hr_row.maxCoeff();
  return (hi - lo) <= eps1 && lo > eps0;
}

namespace {

/// Middle-branch contribution of pair a under one draw.
double pair_term(const DecisionInputs& inputs, const UtilityConfig& config, int a,
                 const Eigen::RowVectorXd& row) {
  return (row(a) - config.beta) * size_penalty(inputs.subgroup_sizes(a), config.alpha,
                                               config.min_size);
}

}  // namespace

double utility(const SubpopulationReport& report, const Eigen::RowVectorXd& log_hr_row,
               const DecisionInputs& inputs, const UtilityConfig& config) {
  if (h0_member(log_hr_row, config.eps0))
    return report.kind() == SubpopulationReport::Kind::None ? config.u0 : 0.0;
  if (h1_member(log_hr_row, config.eps0, config.eps1))
    return report.kind() == SubpopulationReport::Kind::Overall ? config.u1 : 0.0;
  if (report.kind() != SubpopulationReport::Kind::Pairs) return 0.0;
  double out = 0.0;
  for (const auto& pair : report.pairs()) {
    const auto it = std::find(inputs.pairs.begin(), inputs.pairs.end(), pair);
    if (it == inputs.pairs.end())
      throw std::invalid_argument("utility: report contains a pair outside the eligible set");
    out += pair_term(inputs, config, static_cast<int>(it - inputs.pairs.begin()), log_hr_row);
  }
  return out;
}

double expected_utility(const SubpopulationReport& report, const DecisionInputs& inputs,
                        const UtilityConfig& config) {
  inputs.validate();
  double total = 0.0;
  for (int d = 0; d < inputs.n_draws(); ++d)
    total += utility(report, inputs.log_hr.row(d), inputs, config);
  return total / inputs.n_draws();
}

bool report_preferred(const SubpopulationReport& lhs, const SubpopulationReport& rhs) {
  auto rank = [](const SubpopulationReport& r) {
    switch (r.kind()) {
      case SubpopulationReport::Kind::None:
        return 0;
      case SubpopulationReport::Kind::Overall:
        return 1;
      case SubpopulationReport::Kind::Pairs:
        return 2;
    }
    return 0;
  };
  if (rank(lhs) != rank(rhs)) return rank(lhs) < rank(rhs);
  if (lhs.pairs().size() != rhs.pairs().size()) return lhs.pairs().size() < rhs.pairs().size();
  return lhs.pairs() < rhs.pairs();
}

ReportResult optimal_report(const DecisionInputs& inputs, const UtilityConfig& config) {
  inputs.validate();
  config.validate();
  const int n_pairs = inputs.n_pairs();
  const int n_draws = inputs.n_draws();

  ReportResult result;
  result.pair_contribution = Eigen::VectorXd::Zero(n_pairs);
  result.pair_mean_log_hr = Eigen::VectorXd::Zero(n_pairs);
  int h0_count = 0, h1_count = 0;
  for (int d = 0; d < n_draws; ++d) {
    const Eigen::RowVectorXd row = inputs.log_hr.row(d);
    result.pair_mean_log_hr += row.transpose() / n_draws;
    if (h0_member(row, config.eps0)) {
      ++h0_count;
      continue;
    }
    if (h1_member(row, config.eps0, config.eps1)) {
      ++h1_count;
      continue;
    }
    for (int a = 0; a < n_pairs; ++a)
      result.pair_contribution(a) += pair_term(inputs, config, a, row);
  }
  result.pair_contribution /= n_draws;
  result.prob_h0 = static_cast<double>(h0_count) / n_draws;
  result.prob_h1 = static_cast<double>(h1_count) / n_draws;

  std::vector<Candidate> candidates;
  candidates.push_back({SubpopulationReport::none(), config.u0 * result.prob_h0});
  candidates.push_back({SubpopulationReport::overall(), config.u1 * result.prob_h1});
  for (int a = 0; a < n_pairs; ++a)
    candidates.push_back({SubpopulationReport::of_pairs({inputs.pairs[a]}),
                          result.pair_contribution(a)});

  // Additivity: the best pair set collects exactly the strictly positive
  // expected contributions; if none is positive the best nonempty set is the
  // top singleton, already among the candidates.
  std::vector<MutationTumorPair> positive;
  double positive_utility = 0.0;
  for (int a = 0; a < n_pairs; ++a) {
    if (result.pair_contribution(a) > 0.0) {
      positive.push_back(inputs.pairs[a]);
      positive_utility += result.pair_contribution(a);
    }
  }
  if (positive.size() > 1)
    candidates.push_back({SubpopulationReport::of_pairs(positive), positive_utility});

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.expected_utility != y.expected_utility) return x.expected_utility > y.expected_utility;
    return report_preferred(x.report, y.report);
  });
  result.ranked = candidates;
  result.best = candidates.front().report;
  result.best_utility = candidates.front().expected_utility;
  return result;
}

namespace {

/// Groups patients by identical covariate content so hazard evaluations are
/// shared across clones of the same profile.
struct RowGroups {
  std::vector<Eigen::RowVectorXd> unique_rows_other;
  std::vector<Eigen::RowVectorXd> unique_rows_targeted;
  std::vector<int> group_of_patient;
};

RowGroups group_rows(std::span<const Patient> patients, const TrialFrame& frame,
                     bool include_arm) {
  RowGroups groups;
  groups.group_of_patient.resize(patients.size());
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < patients.size(); ++i) {
    const Patient& p = patients[i];
    std::string key(reinterpret_cast<const char*>(p.mutations.entries.data()),
                    p.mutations.entries.size() * sizeof(int));
    key.append(reinterpret_cast<const char*>(&p.tumor), sizeof(int));
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(groups.unique_rows_other.size()));
    if (inserted) {
      groups.unique_rows_other.push_back(
          ppmx::covariate_row(p, Arm::Other, frame, include_arm));
      groups.unique_rows_targeted.push_back(
          ppmx::covariate_row(p, Arm::Targeted, frame, include_arm));
    }
    groups.group_of_patient[i] = it->second;
  }
  return groups;
}

}  // namespace

DecisionInputs decision_inputs(const ppmx::PosteriorDraws& draws,
                               std::span<const Patient> patients, const TrialFrame& frame,
                               const HorizonConfig& horizon, int min_size) {
  if (draws.n_draws() == 0) throw std::invalid_argument("decision_inputs: no posterior draws");
  horizon.validate();
  DecisionInputs inputs;
  inputs.pairs = eligible_pairs(patients, frame, min_size);
  const int n_pairs = static_cast<int>(inputs.pairs.size());
  inputs.subgroup_sizes.resize(n_pairs);
  std::vector<std::vector<int>> member_groups(n_pairs);

  const RowGroups groups = group_rows(patients, frame, draws.model.include_arm);
  for (int a = 0; a < n_pairs; ++a) {
    inputs.subgroup_sizes(a) = subgroup_size(patients, inputs.pairs[a]);
    for (std::size_t i = 0; i < patients.size(); ++i)
      if (pair_membership(patients[i], inputs.pairs[a]))
        member_groups[a].push_back(groups.group_of_patient[i]);
  }

  const ppmx::SimilarityEngine engine(draws.model.hyper, draws.model.cohesion,
                                      static_cast<int>(patients.size()) + 1);
  const int n_groups = static_cast<int>(groups.unique_rows_other.size());
  inputs.log_hr.resize(draws.n_draws(), n_pairs);
  Eigen::ArrayXd ah_other(n_groups), ah_targeted(n_groups);
  for (int d = 0; d < draws.n_draws(); ++d) {
    const ppmx::PartitionState& draw = draws.draws[d];
    for (int g = 0; g < n_groups; ++g) {
      ah_other(g) = predictive::average_hazard(
          predictive::mixture_for(draw, groups.unique_rows_other[g], draws.model, engine), horizon);
      ah_targeted(g) = predictive::average_hazard(
          predictive::mixture_for(draw, groups.unique_rows_targeted[g], draws.model, engine),
          horizon);
    }
    for (int a = 0; a < n_pairs; ++a) {
      double sum_other = 0.0, sum_targeted = 0.0;
      for (int g : member_groups[a]) {
        sum_other += ah_other(g);
        sum_targeted += ah_targeted(g);
      }
      const double n_a = static_cast<double>(member_groups[a].size());
      if (sum_other == 0.0 && sum_targeted == 0.0)
        inputs.log_hr(d, a) = 0.0;
      else
        inputs.log_hr(d, a) = std::log((sum_other / n_a) / (sum_targeted / n_a));
    }
  }
  return inputs;
}

DecisionInputs truth_inputs(const sim::Scenario& scenario, std::span<const Patient> patients,
                            const TrialFrame& frame, const HorizonConfig& horizon, int min_size) {
  horizon.validate();
  DecisionInputs inputs;
  inputs.pairs = eligible_pairs(patients, frame, min_size);
  const int n_pairs = static_cast<int>(inputs.pairs.size());
  inputs.subgroup_sizes.resize(n_pairs);
  inputs.log_hr.resize(1, n_pairs);
  for (int a = 0; a < n_pairs; ++a) {
    const MutationTumorPair& pair = inputs.pairs[a];
    inputs.subgroup_sizes(a) = subgroup_size(patients, pair);
    double sum_other = 0.0, sum_targeted = 0.0;
    int count = 0;
    for (const Patient& p : patients) {
      if (!pair_membership(p, pair)) continue;
      sum_other += sim::true_average_hazard(scenario, p, Arm::Other, horizon.t_months);
      sum_targeted += sim::true_average_hazard(scenario, p, Arm::Targeted, horizon.t_months);
      ++count;
    }
    if (sum_other == 0.0 && sum_targeted == 0.0)
      inputs.log_hr(0, a) = 0.0;
    else
      inputs.log_hr(0, a) = std::log(sum_other / sum_targeted);
  }
  return inputs;
}

double true_utility(const SubpopulationReport& report, const sim::Scenario& scenario,
                    std::span<const Patient> patients, const TrialFrame& frame,
                    const UtilityConfig& config, const HorizonConfig& horizon) {
  const DecisionInputs inputs = truth_inputs(scenario, patients, frame, horizon, config.min_size);
  return utility(report, inputs.log_hr.row(0), inputs, config);
}

ReportResult true_report(const sim::Scenario& scenario, std::span<const Patient> patients,
                         const TrialFrame& frame, const UtilityConfig& config,
                         const HorizonConfig& horizon) {
  return optimal_report(truth_inputs(scenario, patients, frame, horizon, config.min_size), config);
}

}  // namespace basket::decision
