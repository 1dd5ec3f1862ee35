#include "basket/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace basket::outputs {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell) {
  if (cell == "NA") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(cell);
}

std::string cell_or_na(double v) { return std::isnan(v) ? "NA" : format_double(v); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_replicates(std::ostream& out, std::span<const sim::RepResult> reps,
                      const TrialFrame& frame) {
  out << "rep,seed,report,true_report,horizon,prob_h0,prob_h1,"
         "tie_applicable,tie,tpr_applicable,tpr,subset_applicable,"
         "tsr_hits,tsr_total,fsr_hits,fsr_total,fnr,fpr";
  auto pair_cols = [&](const std::string& prefix) {
    for (const auto& a : frame.aberrations)
      for (const auto& t : frame.tumors) out << "," << prefix << ":" << a << ":" << t;
  };
  pair_cols("alloc");
  pair_cols("te_est");
  pair_cols("te_true");
  out << "\n";
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const sim::RepResult& rep = reps[r];
    const sim::ErrorBits& bits = rep.bits;
    out << r << "," << rep.seed << "," << rep.report.label(frame) << ","
        << rep.truth.label(frame) << "," << format_double(rep.horizon) << ","
        << format_double(rep.prob_h0) << "," << format_double(rep.prob_h1) << ","
        << bits.tie_applicable << "," << bits.tie << "," << bits.tpr_applicable << "," << bits.tpr
        << "," << bits.subset_applicable << "," << bits.tsr_hits << "," << bits.tsr_total << ","
        << bits.fsr_hits << "," << bits.fsr_total << "," << bits.fnr << "," << bits.fpr;
    auto matrix_cells = [&](const Eigen::MatrixXd& m) {
      for (int j = 0; j < frame.n_aberrations(); ++j)
        for (int c = 0; c < frame.n_tumors(); ++c) out << "," << cell_or_na(m(j, c));
    };
    matrix_cells(rep.alloc_frac);
    matrix_cells(rep.te.te_est);
    matrix_cells(rep.te.te_true);
    out << "\n";
  }
}

std::vector<sim::RepResult> read_replicates(std::istream& in, const TrialFrame& frame) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("replicates: empty file");
  const int q = frame.n_aberrations();
  const int nc = frame.n_tumors();
  const int n_fixed = 18;
  const int expected = n_fixed + 3 * q * nc;

  std::vector<sim::RepResult> reps;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != expected)
      throw std::runtime_error("replicates: wrong column count");
    sim::RepResult rep;
    rep.seed = std::stoull(cells[1]);
    rep.report = SubpopulationReport::parse(cells[2], frame);
    rep.truth = SubpopulationReport::parse(cells[3], frame);
    rep.horizon = parse_cell(cells[4]);
    rep.prob_h0 = parse_cell(cells[5]);
    rep.prob_h1 = parse_cell(cells[6]);
    rep.bits.tie_applicable = cells[7] == "1";
    rep.bits.tie = cells[8] == "1";
    rep.bits.tpr_applicable = cells[9] == "1";
    rep.bits.tpr = cells[10] == "1";
    rep.bits.subset_applicable = cells[11] == "1";
    rep.bits.tsr_hits = std::stoi(cells[12]);
    rep.bits.tsr_total = std::stoi(cells[13]);
    rep.bits.fsr_hits = std::stoi(cells[14]);
    rep.bits.fsr_total = std::stoi(cells[15]);
    rep.bits.fnr = cells[16] == "1";
    rep.bits.fpr = cells[17] == "1";
    rep.alloc_frac.resize(q, nc);
    rep.te.te_est.resize(q, nc);
    rep.te.te_true.resize(q, nc);
    rep.te.abs_error.resize(q, nc);
    int col = n_fixed;
    for (int j = 0; j < q; ++j)
      for (int c = 0; c < nc; ++c) rep.alloc_frac(j, c) = parse_cell(cells[col++]);
    for (int j = 0; j < q; ++j)
      for (int c = 0; c < nc; ++c) rep.te.te_est(j, c) = parse_cell(cells[col++]);
    for (int j = 0; j < q; ++j)
      for (int c = 0; c < nc; ++c) rep.te.te_true(j, c) = parse_cell(cells[col++]);
    rep.te.abs_error = (rep.te.te_est - rep.te.te_true).cwiseAbs();
    reps.push_back(std::move(rep));
  }
  return reps;
}

void write_summary(std::ostream& out, const sim::OperatingChars& oc) {
  auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  out << "n_reps,TIE,TSR,TPR,FSR,FNR,FPR\n";
  out << oc.n_reps << "," << cell(oc.tie) << "," << cell(oc.tsr) << "," << cell(oc.tpr) << ","
      << cell(oc.fsr) << "," << cell(oc.fnr) << "," << cell(oc.fpr) << "\n";
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m, const TrialFrame& frame) {
  out << "aberration";
  for (const auto& t : frame.tumors) out << "," << t;
  out << "\n";
  for (int j = 0; j < frame.n_aberrations(); ++j) {
    out << frame.aberrations[j];
    for (int c = 0; c < frame.n_tumors(); ++c) out << "," << cell_or_na(m(j, c));
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix(std::istream& in, const TrialFrame& frame) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("matrix: empty file");
  Eigen::MatrixXd m(frame.n_aberrations(), frame.n_tumors());
  int j = 0;
  while (std::getline(in, line) && j < frame.n_aberrations()) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != frame.n_tumors() + 1)
      throw std::runtime_error("matrix: wrong column count");
    for (int c = 0; c < frame.n_tumors(); ++c) m(j, c) = parse_cell(cells[c + 1]);
    ++j;
  }
  if (j != frame.n_aberrations()) throw std::runtime_error("matrix: missing rows");
  return m;
}

void write_heatmap_svg(std::ostream& out, const Eigen::MatrixXd& m, const TrialFrame& frame,
                       const std::string& title) {
  const int q = frame.n_aberrations();
  const int nc = frame.n_tumors();
  const int cell = 60, left = 90, top = 50;
  const int width = left + nc * cell + 20;
  const int height = top + q * cell + 20;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  for (int c = 0; c < nc; ++c)
    out << "<text x=\"" << left + c * cell + 8 << "\" y=\"" << top - 8
        << "\" font-size=\"12\">" << frame.tumors[c] << "</text>\n";
  for (int j = 0; j < q; ++j) {
    out << "<text x=\"8\" y=\"" << top + j * cell + 34 << "\" font-size=\"12\">"
        << frame.aberrations[j] << "</text>\n";
    for (int c = 0; c < nc; ++c) {
      const double v = m(j, c);
      int shade = 255;
      std::string label = "NA";
      if (!std::isnan(v)) {
        const double clipped = std::min(1.0, std::max(0.0, v));
        shade = static_cast<int>(255.0 * (1.0 - clipped));
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        label = buf;
      }
      out << "<rect x=\"" << left + c * cell << "\" y=\"" << top + j * cell << "\" width=\""
          << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << shade << "," << shade
          << ",255)\" stroke=\"black\"/>\n";
      out << "<text x=\"" << left + c * cell + 10 << "\" y=\"" << top + j * cell + 34
          << "\" font-size=\"12\">" << label << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace basket::outputs
