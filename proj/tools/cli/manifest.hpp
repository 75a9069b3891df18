#pragma once

#include <string>
#include <vector>

#include "bbmsel/sim_config.hpp"
#include "json.hpp"

namespace bbmsel::cli {

struct ExperimentManifest {
  SimConfig cfg;
  Mode mode = Mode::Killed;
  std::string code_version;
  /// N-BBM selection timing: "step-end" or "branch-events".
  std::string timing = "step-end";
  /// Optional outputs: killed-mode event logs and final N-BBM populations.
  bool events = false;
  bool checkpoint = false;
  /// Files written by the run, relative to the output directory.
  std::vector<std::string> outputs;
  std::string created_utc;

  /// SHA-256 of the canonical JSON of (code_version, mode, options, config). Output
  /// paths and timestamps are left out so that identical experiments share a hash.
  std::string content_hash() const;
};

std::string serialize(const ExperimentManifest& m);
ExperimentManifest parse_manifest(const std::string& text);
ExperimentManifest read_manifest(const std::string& path);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& bytes);

/// ISO 8601 UTC time; honours SOURCE_DATE_EPOCH for reproducible manifests.
std::string utc_now();

const char* code_version();

}  // namespace bbmsel::cli
