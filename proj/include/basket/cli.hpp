#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace basket::cli {

struct CommonOptions {
  std::string config_path;  // empty: built-in defaults
  std::uint64_t seed = 20170801;
  std::optional<int> reps;
  std::string out_dir = "out";
  int threads = 0;  // 0: hardware concurrency
  bool no_adaptive = false;
  bool no_censoring = false;
};

int cmd_simulate(const CommonOptions& options);
int cmd_analyze(const CommonOptions& options, const std::string& roster_path);
int cmd_calibrate(const CommonOptions& options);
int cmd_compare(const CommonOptions& options);
int cmd_print_config(const CommonOptions& options);
int cmd_plot(const std::string& matrix_path, const std::string& svg_path,
             const std::string& title, const std::string& config_path);

}  // namespace basket::cli
