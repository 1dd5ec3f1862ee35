#include "basket/allocation.hpp"

#include <stdexcept>

namespace basket::alloc {

void DesignConfig::validate() const {
  if (run_in < 0 || adaptive < 0) throw std::invalid_argument("phase sizes must be >= 0");
  if (n_max() <= 0) throw std::invalid_argument("trial size must be > 0");
  if (!(p0 > 0.0) || !(p0 <= p1) || !(p1 < 1.0))
    throw std::invalid_argument("clamp bounds must satisfy 0 < p0 <= p1 < 1");
  if (adaptive > 0) {
    if (cohort <= 0) throw std::invalid_argument("cohort must be > 0");
    if (adaptive % cohort != 0) throw std::invalid_argument("cohort must divide the adaptive size");
  }
  if (follow_up_months < 0.0) throw std::invalid_argument("follow-up must be >= 0");
}

double allocation_prob(double pi, const DesignConfig& config) {
  config.validate();
  if (pi < 0.0 || pi > 1.0) throw std::invalid_argument("pi must lie in [0,1]");
  if (pi < config.p0) return config.p0;
  if (pi > config.p1) return config.p1;
  return pi;
}

Arm assign_arm(const Patient& patient, Phase phase, std::optional<double> pi,
               const DesignConfig& config, Rng& rng, AllocationRecord* audit) {
  if (phase == Phase::Adaptive && !pi)
    throw std::invalid_argument("adaptive assignment requires pi");
  if (phase == Phase::RunIn && pi)
    throw std::invalid_argument("run-in assignment must not receive pi");
  const double prob = phase == Phase::RunIn ? 0.5 : allocation_prob(*pi, config);
  const Arm arm = rng.bernoulli(prob) ? Arm::Targeted : Arm::Other;
  if (audit) {
    audit->patient_id = patient.id;
    audit->phase = phase;
    audit->pi = pi.value_or(0.5);
    audit->prob_targeted = prob;
    audit->arm = arm;
    audit->rng_counter = rng.counter();
  }
  return arm;
}

TrialSchedule trial_schedule(const DesignConfig& config) {
  config.validate();
  TrialSchedule schedule;
  schedule.follow_up_months = config.follow_up_months;
  for (int accrued = config.run_in; accrued < config.n_max(); accrued += config.cohort)
    schedule.refit_after.push_back(accrued);
  return schedule;
}

}  // namespace basket::alloc
