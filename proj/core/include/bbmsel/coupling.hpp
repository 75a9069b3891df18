#pragma once

#include <cstdint>
#include <vector>

#include "bbmsel/label.hpp"
#include "bbmsel/series.hpp"
#include "bbmsel/sim_config.hpp"

namespace bbmsel {

enum class CouplingLevel : std::uint8_t {
  /// An N-BBM particle moved to a new N-plus partner.
  Middle,
  /// An N-minus particle moved to a new N-BBM partner.
  Minus,
};

struct RewireRecord {
  double time = 0.0;
  CouplingLevel level = CouplingLevel::Middle;
  Label rewired;
  Label old_partner;
  Label new_partner;
  double old_partner_x = 0.0;
  double new_partner_x = 0.0;
};

struct CoupledResult {
  StatsSeries plus;
  StatsSeries middle;
  StatsSeries minus;
  std::vector<RewireRecord> rewires;
  std::size_t rewire_count = 0;
  std::size_t events = 0;
  std::size_t checks = 0;
};

/**
 * Three selection systems driven by one branching forest (the N-plus system).
 *
 * Each N-BBM particle follows an N-plus particle at a fixed non-negative
 * offset, and each N-minus particle follows an N-BBM particle the same way.
 * When a partner is killed the follower is moved to the leftmost free particle
 * at or to the right of the killed one. The pointwise ordering and injectivity
 * of both maps are checked after every event; failure throws CouplingViolation.
 */
CoupledResult run_coupled(const SimConfig& cfg, std::uint32_t replica);

}  // namespace bbmsel
