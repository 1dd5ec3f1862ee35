#include "basket/scenario.hpp"

#include "basket/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace basket::sim {

double Scenario::log_mean(const Patient& patient, Arm arm) const {
  if (arm == Arm::Other) return 0.0;
  double mu = beta0;
  for (const auto& inter : interactions) {
    if (pair_membership(patient, inter.pair)) mu += inter.coef;
  }
  return mu;
}

void Scenario::validate(const TrialFrame& frame) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("scenario sigma must be > 0");
  if (population.rows() != frame.n_aberrations() || population.cols() != frame.n_tumors())
    throw std::invalid_argument("population matrix shape does not match frame");
  if ((population.array() < 0).any())
    throw std::invalid_argument("population sizes must be nonnegative");
  for (const auto& inter : interactions) {
    if (inter.pair.aberration < 0 || inter.pair.aberration >= frame.n_aberrations() ||
        inter.pair.tumor < 0 || inter.pair.tumor >= frame.n_tumors())
      throw std::invalid_argument("interaction pair out of range");
  }
}

Eigen::MatrixXi Scenario::default_population() {
  Eigen::MatrixXi pop(5, 3);
  pop << 15, 20, 5,
         10, 100, 60,
         50, 30, 5,
         13, 25, 5,
         12, 30, 20;
  return pop;
}

Scenario Scenario::builtin(int number, const TrialFrame& frame) {
  Scenario s;
  s.population = default_population();
  auto pair = [&frame](const char* mutation, const char* tumor) {
    return MutationTumorPair{frame.aberration_index(mutation), frame.tumor_index(tumor)};
  };
  switch (number) {
    case 1:
      break;
    case 2:
      s.beta0 = 0.4;
      break;
    case 3:
      s.interactions = {{pair("BRAF", "Lung"), 0.4}};
      break;
    case 4:
      s.interactions = {{pair("PIK3CA", "BRCA"), 0.3},
                        {pair("BRAF", "Lung"), 0.3},
                        {pair("PTEN", "Lung"), 0.4}};
      break;
    case 5:
      s.interactions = {{pair("PIK3CA", "BRCA"), 0.3},
                        {pair("BRAF", "Ovary"), 0.4},
                        {pair("BRAF", "Lung"), 0.3}};
      break;
    case 6:
      s.interactions = {{pair("BRAF", "BRCA"), 0.4},
                        {pair("BRAF", "Ovary"), 0.3},
                        {pair("BRAF", "Lung"), 0.4}};
      break;
    default:
      throw std::invalid_argument("builtin scenario number must be 1..6");
  }
  return s;
}

std::vector<Patient> sample_population(const Scenario& scenario, const TrialFrame& frame,
                                       Rng& rng) {
  scenario.validate(frame);
  std::vector<Patient> patients;
  patients.reserve(scenario.population.sum());
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    for (int c = 0; c < frame.n_tumors(); ++c) {
      for (int k = 0; k < scenario.population(j, c); ++k) {
        Patient p;
        p.mutations.entries = Eigen::VectorXi::Zero(frame.n_aberrations());
        p.mutations.entries(j) = 1;
        p.tumor = c;
        patients.push_back(std::move(p));
      }
    }
  }
  // Fisher-Yates permutation for enrollment order.
  for (int i = static_cast<int>(patients.size()) - 1; i > 0; --i) {
    const int k = rng.uniform_int(i + 1);
    std::swap(patients[i], patients[k]);
  }
  for (std::size_t i = 0; i < patients.size(); ++i) patients[i].id = static_cast<int>(i);
  return patients;
}

double true_outcome_time(const Patient& patient, Arm arm, const Scenario& scenario, Rng& rng) {
  return std::exp(rng.normal(scenario.log_mean(patient, arm), scenario.sigma));
}

double true_survival(const Scenario& scenario, const Patient& patient, Arm arm, double t) {
  if (t < 0.0) throw std::invalid_argument("true_survival: t must be >= 0");
  if (t == 0.0) return 1.0;
  const double mu = scenario.log_mean(patient, arm);
  return math::normal_sf((std::log(t) - mu) / scenario.sigma);
}

double true_average_hazard(const Scenario& scenario, const Patient& patient, Arm arm,
                           double horizon_months) {
  if (!(horizon_months > 0.0)) throw std::invalid_argument("horizon must be > 0");
  const double s = std::max(true_survival(scenario, patient, arm, horizon_months), 1e-15);
  return -std::log(s) / horizon_months;
}

double true_mean_event_time(const Scenario& scenario, const Patient& patient, Arm arm) {
  return std::exp(scenario.log_mean(patient, arm) + 0.5 * scenario.sigma * scenario.sigma);
}

}  // namespace basket::sim
