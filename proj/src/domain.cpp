#include "basket/domain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace basket {

int TrialFrame::aberration_index(const std::string& name) const {
  for (int j = 0; j < n_aberrations(); ++j)
    if (aberrations[j] == name) return j;
  throw std::invalid_argument("unknown aberration: " + name);
}

int TrialFrame::tumor_index(const std::string& name) const {
  for (int c = 0; c < n_tumors(); ++c)
    if (tumors[c] == name) return c;
  throw std::invalid_argument("unknown tumor type: " + name);
}

TrialFrame TrialFrame::default_frame() {
  return TrialFrame{{"FGFR", "BRAF", "PIK3CA", "PTEN", "MET"}, {"BRCA", "Ovary", "Lung"}};
}

std::vector<int> MutationProfile::recorded_set() const {
  std::vector<int> out;
  for (int j = 0; j < entries.size(); ++j)
    if (entries(j) != kNotRecorded) out.push_back(j);
  return out;
}

void MutationProfile::validate() const {
  for (int j = 0; j < entries.size(); ++j) {
    const int v = entries(j);
    if (v != 0 && v != 1 && v != kNotRecorded)
      throw std::invalid_argument("mutation entry must be 0, 1 or NA");
  }
}

void Patient::validate(const TrialFrame& frame) const {
  if (mutations.entries.size() != frame.n_aberrations())
    throw std::invalid_argument("mutation profile length does not match frame");
  mutations.validate();
  if (tumor < 0 || tumor >= frame.n_tumors())
    throw std::invalid_argument("tumor index out of range");
  if (outcome && !(outcome->time > 0.0))
    throw std::invalid_argument("outcome time must be > 0");
}

std::string MutationTumorPair::label(const TrialFrame& frame) const {
  return "(" + frame.aberrations.at(aberration) + "," + frame.tumors.at(tumor) + ")";
}

SubpopulationReport SubpopulationReport::of_pairs(std::vector<MutationTumorPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("pair report must be nonempty");
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
    throw std::invalid_argument("pair report contains duplicates");
  return SubpopulationReport(Kind::Pairs, std::move(pairs));
}

bool SubpopulationReport::contains(const MutationTumorPair& pair) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), pair);
}

std::string SubpopulationReport::label(const TrialFrame& frame) const {
  switch (kind_) {
    case Kind::None:
      return "A0";
    case Kind::Overall:
      return "A1";
    case Kind::Pairs: {
      std::ostringstream os;
      for (std::size_t i = 0; i < pairs_.size(); ++i) {
        if (i) os << ";";
        os << pairs_[i].label(frame);
      }
      return os.str();
    }
  }
  return "A0";
}

SubpopulationReport SubpopulationReport::parse(const std::string& text, const TrialFrame& frame) {
  if (text == "A0") return none();
  if (text == "A1") return overall();
  std::vector<MutationTumorPair> pairs;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ';')) {
    if (token.size() < 4 || token.front() != '(' || token.back() != ')')
      throw std::invalid_argument("malformed report token: " + token);
    const std::string inner = token.substr(1, token.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed report token: " + token);
    pairs.push_back(MutationTumorPair{frame.aberration_index(inner.substr(0, comma)),
                                      frame.tumor_index(inner.substr(comma + 1))});
  }
  return of_pairs(std::move(pairs));
}

bool pair_membership(const Patient& patient, const MutationTumorPair& pair) {
  if (patient.tumor != pair.tumor) return false;
  return patient.mutations.entries(pair.aberration) == 1;
}

int subgroup_size(std::span<const Patient> patients, const MutationTumorPair& pair) {
  int count = 0;
  for (const Patient& p : patients)
    if (pair_membership(p, pair)) ++count;
  return count;
}

std::vector<MutationTumorPair> eligible_pairs(std::span<const Patient> patients,
                                              const TrialFrame& frame, int min_size) {
  if (min_size < 1) throw std::invalid_argument("min_size must be >= 1");
  std::vector<MutationTumorPair> out;
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    for (int c = 0; c < frame.n_tumors(); ++c) {
      const MutationTumorPair pair{j, c};
      if (subgroup_size(patients, pair) >= min_size) out.push_back(pair);
    }
  }
  return out;
}

}  // namespace basket
