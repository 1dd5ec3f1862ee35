#pragma once

#include "basket/operating.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace basket::outputs {

/// Fixed %.17g formatting so the record files round-trip bit-exactly.
std::string format_double(double v);

/// One row per replicate: seed, reports, horizon, posterior H0/H1 mass,
/// error-indicator bits, then per-pair allocation fractions and estimated /
/// true TE columns.
void write_replicates(std::ostream& out, std::span<const sim::RepResult> reps,
                      const TrialFrame& frame);

/// Reads the file written by write_replicates back into the fields needed to
/// recompute operating characteristics.
std::vector<sim::RepResult> read_replicates(std::istream& in, const TrialFrame& frame);

/// One-line summary with the six error rates (NA when not applicable).
void write_summary(std::ostream& out, const sim::OperatingChars& oc);

/// A labeled aberration x tumor matrix.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m, const TrialFrame& frame);
Eigen::MatrixXd read_matrix(std::istream& in, const TrialFrame& frame);

/// Simple SVG heatmap of an aberration x tumor matrix on [0,1].
void write_heatmap_svg(std::ostream& out, const Eigen::MatrixXd& m, const TrialFrame& frame,
                       const std::string& title);

}  // namespace basket::outputs
