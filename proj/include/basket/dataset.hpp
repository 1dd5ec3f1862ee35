#pragma once

#include "basket/domain.hpp"
#include "basket/similarity.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>

namespace basket::ppmx {

/// Covariate-and-outcome view handed to the sampler. Covariate cells are NaN
/// when not recorded; time is NaN for patients without an observed outcome.
struct PpmxData {
  Eigen::MatrixXd x;             // n x p
  Eigen::ArrayXd time;           // event or censoring time in months
  std::vector<std::uint8_t> censored;

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }
  bool has_outcome(int i) const { return !std::isnan(time(i)); }
  int n_with_outcome() const;
  int n_censored() const;
};

/// Priors shared by the sampler and all posterior-predictive evaluations.
struct AnalysisModel {
  SimilarityHyper hyper;
  CohesionConfig cohesion;
  NixParams outcome_prior;  // lognormal cluster base measure on (mu, sigma2)
  bool include_arm = true;  // whether the last covariate column is the arm
};

/// Column specs for a frame: one binary column per aberration, one tumor
/// column, and optionally one arm column, all categorical.
SimilarityHyper default_similarity_schema(const TrialFrame& frame, double dirichlet_weight,
                                          bool include_arm);

/// Query covariate row for a patient under a (possibly counterfactual) arm.
Eigen::RowVectorXd covariate_row(const Patient& patient, std::optional<Arm> arm,
                                 const TrialFrame& frame, bool include_arm);

/// Assembles the sampler view of a set of enrolled patients. When
/// analysis_month is given, outcomes are administratively censored at each
/// patient's time on study; otherwise recorded outcomes are taken as is.
/// Patients whose follow-up at analysis_month is not positive contribute
/// covariates only.
PpmxData build_dataset(std::span<const Patient> patients, const TrialFrame& frame,
                       bool include_arm, std::optional<double> analysis_month = std::nullopt);

/// Weakly informative outcome prior scaled to the data: location and spread
/// of log event times (censored times excluded when any event is observed).
NixParams empirical_outcome_prior(const PpmxData& data, double k, double nu);

}  // namespace basket::ppmx
