#pragma once

#include <string>
#include <vector>

#include "bbmsel/sim_config.hpp"
#include "json.hpp"

namespace bbmsel::cli {

struct ParsedConfig {
  SimConfig cfg;
  Mode mode = Mode::Killed;
  std::vector<std::string> warnings;
};

/**
 * Reads an INI file with sections [law], [interval], [bbbm], [selection] and
 * [run]. Unknown keys are rejected. The mode comes from run.mode unless
 * `mode_override` is non-empty. The result is validated for its mode.
 */
ParsedConfig parse_config(const std::string& path, const std::string& mode_override = "");
ParsedConfig parse_config_text(const std::string& text, const std::string& mode_override = "");

/// Sectioned JSON form of a config; unset optionals are omitted.
nlohmann::ordered_json config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const nlohmann::ordered_json& j);

}  // namespace bbmsel::cli
