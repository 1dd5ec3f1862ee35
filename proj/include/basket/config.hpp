#pragma once

#include "basket/calibrate.hpp"
#include "basket/comparators.hpp"
#include "basket/trial.hpp"

#include <string>

namespace basket {

/// Full engine configuration. Loaded from JSON with exhaustive schema
/// validation: unknown keys, wrong types and out-of-range values are
/// rejected with the offending location.
struct EngineConfig {
  TrialFrame frame = TrialFrame::default_frame();
  sim::Scenario scenario;  // population defaults to the built-in Table of sizes
  alloc::DesignConfig design;
  sim::AnalysisConfig analysis;
  decision::UtilityConfig utility;
  sim::NigPrior comparator;
  bool censoring = false;
  double accrual_months = 24.0;
  int reps = 100;
  std::vector<double> u0_grid{1.3};
  std::vector<double> u1_grid{20.0};
  sim::CalibrationTargets targets;

  EngineConfig();

  sim::TrialConfig trial_config() const;
  void validate() const;

  static EngineConfig from_json_text(const std::string& text);
  static EngineConfig from_file(const std::string& path);
  std::string to_json_text() const;
};

}  // namespace basket
