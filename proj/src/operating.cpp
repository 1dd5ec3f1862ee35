#include "basket/operating.hpp"

#include "basket/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace basket::sim {

OperatingChars operating_characteristics(std::span<const RepResult> reps,
                                         const TrialFrame& frame) {
  if (reps.empty()) throw std::invalid_argument("operating_characteristics: no replicates");
  OperatingChars oc;
  oc.n_reps = static_cast<int>(reps.size());
  const int q = frame.n_aberrations();
  const int nc = frame.n_tumors();
  oc.pr_a = Eigen::MatrixXd::Zero(q, nc);
  oc.mean_alloc_frac = Eigen::MatrixXd::Zero(q, nc);
  Eigen::MatrixXi alloc_n = Eigen::MatrixXi::Zero(q, nc);

  int tie_n = 0, tie_hits = 0;
  int tpr_n = 0, tpr_hits = 0;
  int subset_n = 0, fnr_hits = 0, fpr_hits = 0;
  double tsr_sum = 0.0, fsr_sum = 0.0;
  int tsr_defined = 0, fsr_defined = 0;

  for (const RepResult& rep : reps) {
    const ErrorBits& bits = rep.bits;
    if (bits.tie_applicable) {
      ++tie_n;
      if (bits.tie) ++tie_hits;
    }
    if (bits.tpr_applicable) {
      ++tpr_n;
      if (bits.tpr) ++tpr_hits;
    }
    if (bits.subset_applicable) {
      ++subset_n;
      if (bits.fnr) ++fnr_hits;
      if (bits.fpr) ++fpr_hits;
      if (bits.tsr_total > 0) {
        tsr_sum += static_cast<double>(bits.tsr_hits) / bits.tsr_total;
        ++tsr_defined;
      }
      if (bits.fsr_total > 0) {
        fsr_sum += static_cast<double>(bits.fsr_hits) / bits.fsr_total;
        ++fsr_defined;
      }
    }
    for (int j = 0; j < q; ++j) {
      for (int c = 0; c < nc; ++c) {
        if (rep.report.kind() == SubpopulationReport::Kind::Pairs &&
            rep.report.contains(MutationTumorPair{j, c}))
          oc.pr_a(j, c) += 1.0;
        const double frac = rep.alloc_frac(j, c);
        if (!std::isnan(frac)) {
          oc.mean_alloc_frac(j, c) += frac;
          alloc_n(j, c) += 1;
        }
      }
    }
  }

  oc.pr_a /= static_cast<double>(oc.n_reps);
  for (int j = 0; j < q; ++j)
    for (int c = 0; c < nc; ++c)
      oc.mean_alloc_frac(j, c) = alloc_n(j, c) > 0
                                     ? oc.mean_alloc_frac(j, c) / alloc_n(j, c)
                                     : std::numeric_limits<double>::quiet_NaN();

  if (tie_n > 0) oc.tie = static_cast<double>(tie_hits) / tie_n;
  if (tpr_n > 0) oc.tpr = static_cast<double>(tpr_hits) / tpr_n;
  if (subset_n > 0) {
    oc.fnr = static_cast<double>(fnr_hits) / subset_n;
    oc.fpr = static_cast<double>(fpr_hits) / subset_n;
    if (tsr_defined > 0) oc.tsr = tsr_sum / tsr_defined;
    if (fsr_defined > 0) oc.fsr = fsr_sum / fsr_defined;
  }
  return oc;
}

std::vector<RepResult> run_replicates(const Scenario& scenario, const TrialConfig& config,
                                      const TrialFrame& frame, std::uint64_t master_seed,
                                      int n_reps, int n_threads) {
  if (n_reps < 1) throw std::invalid_argument("run_replicates: n_reps must be >= 1");
  std::vector<RepResult> reps(n_reps);
  parallel_for(n_reps, n_threads, [&](int r) {
    reps[r] = run_trial(scenario, config, frame, derive_seed(master_seed, 0x5e9, r));
  });
  return reps;
}

}  // namespace basket::sim
