#pragma once

#include "basket/domain.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace basket {

/// Roster files are comma-delimited with header
///   id,<one column per aberration>,tumor,arm,time,censored
/// Aberration cells are 0/1/NA, arm is O/TT/NA, time is months or NA,
/// censored is 0/1/NA.
std::vector<Patient> read_roster(std::istream& in, const TrialFrame& frame);
std::vector<Patient> read_roster_file(const std::string& path, const TrialFrame& frame);

void write_roster(std::ostream& out, const TrialFrame& frame, std::span<const Patient> patients);
void write_roster_file(const std::string& path, const TrialFrame& frame,
                       std::span<const Patient> patients);

}  // namespace basket
