#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bbmsel::cli {

struct RunOptions {
  std::string config;
  /// Rerun a manifest written by an earlier run instead of reading a config.
  std::string manifest;
  std::string mode;
  std::string out;
  std::optional<std::size_t> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<long> inject_fault_at;
  unsigned threads = 0;
  /// N-BBM selection timing: "step-end" or "branch-events"; empty keeps the manifest value.
  std::string timing;
  bool events = false;
  bool checkpoint = false;
};

struct LevyOptions {
  double t = 1.0;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double c = 0.0;
  double truncation = 1e-3;
  bool gaussian_small_jumps = true;
  std::vector<double> lambdas{-2, -1, -0.5, 0.5, 1, 2};
  std::string out;
  unsigned threads = 0;
};

int cmd_simulate(const RunOptions& opt, bool coupled_only);
int cmd_selfcheck(const std::string& out);
int cmd_levy(const LevyOptions& opt);
int cmd_report(const std::string& dir, double burn_in_fraction);
int cmd_calibrate();

/// Prints a one-line JSON error record to stderr (and to out/error.json when out is set).
int report_error(const std::exception& e, const std::string& out);

}  // namespace bbmsel::cli
