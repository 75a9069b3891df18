#pragma once

#include <iosfwd>
#include <string>

#include "bbmsel/population.hpp"

namespace bbmsel {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary snapshot: magic, version, manifest hash, time, then particles; all little-endian.
void save_checkpoint(std::ostream& os, const Population& pop, const std::string& manifest_hash);
Population load_checkpoint(std::istream& is, std::string* manifest_hash = nullptr);

}  // namespace bbmsel
