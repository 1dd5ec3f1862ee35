#pragma once

#include <Eigen/Core>

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace basket {

/// Code for a not-recorded tri-state aberration entry.
inline constexpr int kNotRecorded = -1;

/// Fixed enumerations of aberrations and tumor types for a trial.
struct TrialFrame {
  std::vector<std::string> aberrations;
  std::vector<std::string> tumors;

  int n_aberrations() const { return static_cast<int>(aberrations.size()); }
  int n_tumors() const { return static_cast<int>(tumors.size()); }
  int aberration_index(const std::string& name) const;
  int tumor_index(const std::string& name) const;

  /// Default five-aberration, three-tumor frame.
  static TrialFrame default_frame();
};

/// Tri-state aberration indicators: present (1), absent (0), not recorded.
struct MutationProfile {
  Eigen::VectorXi entries;  // each entry is 0, 1 or kNotRecorded

  bool recorded(int j) const { return entries(j) != kNotRecorded; }
  std::vector<int> recorded_set() const;
  void validate() const;
};

enum class Arm : int { Other = 0, Targeted = 1 };

inline const char* arm_name(Arm a) { return a == Arm::Targeted ? "TT" : "O"; }

struct Outcome {
  double time = 0.0;  // months, > 0
  bool censored = false;
};

struct Patient {
  int id = 0;
  MutationProfile mutations;
  int tumor = 0;  // 0-based tumor type
  std::optional<Arm> arm;
  std::optional<Outcome> outcome;
  double arrival_month = 0.0;  // enrollment time used by the simulator

  void validate(const TrialFrame& frame) const;
};

struct MutationTumorPair {
  int aberration = 0;
  int tumor = 0;

  auto operator<=>(const MutationTumorPair&) const = default;
  std::string label(const TrialFrame& frame) const;
};

/// Final recommendation: nothing, everyone, or a set of mutation-tumor pairs.
class SubpopulationReport {
 public:
  enum class Kind { None, Overall, Pairs };

  static SubpopulationReport none() { return SubpopulationReport(Kind::None, {}); }
  static SubpopulationReport overall() { return SubpopulationReport(Kind::Overall, {}); }
  static SubpopulationReport of_pairs(std::vector<MutationTumorPair> pairs);

  Kind kind() const { return kind_; }
  const std::vector<MutationTumorPair>& pairs() const { return pairs_; }
  bool contains(const MutationTumorPair& pair) const;
  bool operator==(const SubpopulationReport&) const = default;

  std::string label(const TrialFrame& frame) const;
  /// Parses the label format written by label(); used by the record readers.
  static SubpopulationReport parse(const std::string& text, const TrialFrame& frame);

 private:
  SubpopulationReport(Kind kind, std::vector<MutationTumorPair> pairs)
      : kind_(kind), pairs_(std::move(pairs)) {}

  Kind kind_;
  std::vector<MutationTumorPair> pairs_;  // sorted, duplicate-free when kind == Pairs
};

/// True iff the patient has the pair's aberration recorded as present and the
/// matching tumor type. A not-recorded entry never qualifies.
bool pair_membership(const Patient& patient, const MutationTumorPair& pair);

int subgroup_size(std::span<const Patient> patients, const MutationTumorPair& pair);

/// All pairs (j, c) whose subgroup has at least min_size members, in
/// (aberration, tumor) lexicographic order.
std::vector<MutationTumorPair> eligible_pairs(std::span<const Patient> patients,
                                              const TrialFrame& frame, int min_size);

}  // namespace basket
