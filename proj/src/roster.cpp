#include "basket/roster.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace basket {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw std::runtime_error("roster line " + std::to_string(line_no) + ": " + what);
}

std::string format_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  return buf;
}

}  // namespace

std::vector<Patient> read_roster(std::istream& in, const TrialFrame& frame) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("roster: empty file");
  const auto header = split_csv(line);
  const int q = frame.n_aberrations();
  std::vector<std::string> expected = {"id"};
  expected.insert(expected.end(), frame.aberrations.begin(), frame.aberrations.end());
  expected.insert(expected.end(), {"tumor", "arm", "time", "censored"});
  if (header != expected) throw std::runtime_error("roster: header does not match trial frame");

  std::vector<Patient> patients;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != q + 5) fail(line_no, "wrong number of columns");
    Patient p;
    try {
      p.id = std::stoi(cells[0]);
    } catch (const std::exception&) {
      fail(line_no, "bad id '" + cells[0] + "'");
    }
    p.mutations.entries.resize(q);
    for (int j = 0; j < q; ++j) {
      const std::string& v = cells[1 + j];
      if (v == "NA")
        p.mutations.entries(j) = kNotRecorded;
      else if (v == "0")
        p.mutations.entries(j) = 0;
      else if (v == "1")
        p.mutations.entries(j) = 1;
      else
        fail(line_no, "aberration cell must be 0/1/NA, got '" + v + "'");
    }
    try {
      p.tumor = frame.tumor_index(cells[1 + q]);
    } catch (const std::exception& e) {
      fail(line_no, e.what());
    }
    const std::string& arm = cells[2 + q];
    if (arm == "TT")
      p.arm = Arm::Targeted;
    else if (arm == "O")
      p.arm = Arm::Other;
    else if (arm != "NA")
      fail(line_no, "arm must be O/TT/NA, got '" + arm + "'");
    const std::string& time = cells[3 + q];
    const std::string& cens = cells[4 + q];
    if (time != "NA") {
      Outcome o;
      try {
        o.time = std::stod(time);
      } catch (const std::exception&) {
        fail(line_no, "bad time '" + time + "'");
      }
      if (!(o.time > 0.0)) fail(line_no, "time must be > 0");
      if (cens == "1")
        o.censored = true;
      else if (cens == "0")
        o.censored = false;
      else
        fail(line_no, "censored must be 0/1 when time is present");
      p.outcome = o;
    } else if (cens != "NA") {
      fail(line_no, "censored must be NA when time is NA");
    }
    try {
      p.validate(frame);
    } catch (const std::exception& e) {
      fail(line_no, e.what());
    }
    patients.push_back(std::move(p));
  }
  return patients;
}

std::vector<Patient> read_roster_file(const std::string& path, const TrialFrame& frame) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open roster file: " + path);
  return read_roster(in, frame);
}

void write_roster(std::ostream& out, const TrialFrame& frame, std::span<const Patient> patients) {
  out << "id";
  for (const auto& a : frame.aberrations) out << "," << a;
  out << ",tumor,arm,time,censored\n";
  for (const Patient& p : patients) {
    out << p.id;
    for (int j = 0; j < frame.n_aberrations(); ++j) {
      const int v = p.mutations.entries(j);
      out << "," << (v == kNotRecorded ? std::string("NA") : std::to_string(v));
    }
    out << "," << frame.tumors.at(p.tumor);
    out << "," << (p.arm ? arm_name(*p.arm) : "NA");
    if (p.outcome) {
      out << "," << format_time(p.outcome->time) << "," << (p.outcome->censored ? 1 : 0);
    } else {
      out << ",NA,NA";
    }
    out << "\n";
  }
}

void write_roster_file(const std::string& path, const TrialFrame& frame,
                       std::span<const Patient> patients) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_roster(out, frame, patients);
}

}  // namespace basket
