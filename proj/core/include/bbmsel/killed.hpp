#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bbmsel/population.hpp"
#include "bbmsel/series.hpp"
#include "bbmsel/sim_config.hpp"

namespace bbmsel {

struct KilledOptions {
  /// Times at which snapshots are taken (sorted, within the horizon).
  std::vector<double> snapshot_times;
  /// Levels r for the counts #{particles in [r, a)}.
  std::vector<double> levels;
  bool keep_positions = false;
  /// Start from one particle here instead of the metastable initial condition.
  std::optional<double> start_x;
  bool record_series = true;
  /// Keep branch and absorption events for an event log.
  bool keep_events = false;
};

struct KilledSnapshot {
  double t = 0.0;
  double Z = 0.0;
  double Y = 0.0;
  /// Particles absorbed at a during [0, t].
  double R_cum = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> count_above;
  std::vector<double> positions;
};

struct KilledResult {
  double Z0 = 0.0;
  double Y0 = 0.0;
  std::size_t N0 = 0;
  std::vector<KilledSnapshot> snapshots;
  StatsSeries series;
  std::vector<Event> events;
};

/// BBM with drift -mu killed at 0 and at a, started from the metastable profile (or one point).
KilledResult run_killed(const SimConfig& cfg, std::uint32_t replica, const KilledOptions& opt = {});

}  // namespace bbmsel
