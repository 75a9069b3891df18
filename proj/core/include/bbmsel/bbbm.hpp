#pragma once

#include <cstdint>
#include <vector>

#include "bbmsel/barrier.hpp"
#include "bbmsel/population.hpp"
#include "bbmsel/series.hpp"
#include "bbmsel/sim_config.hpp"

namespace bbmsel {

enum class BarrierVariant { Plain, Flat, Sharp, CSharp };

/// Summary of one breakout trial run inside a barrier simulation.
struct TrialRecord {
  double tau = 0.0;
  double Z = 0.0;
  double Y = 0.0;
  std::size_t stopped = 0;
  double sigma_max = 0.0;
  bool sigma_exceeded = false;
  bool breakout = false;
  /// Launched while its piece was still waiting for a breakout.
  bool eligible = false;
  bool done = false;
};

struct BbbmResult {
  StatsSeries series;
  BarrierState barrier{1.0};
  std::vector<TrialRecord> trials;
  /// N used for med_alpha: initial count, N-flat or N-sharp.
  std::size_t N_reference = 0;
  std::size_t absorbed = 0;
  std::size_t hits_a = 0;
  std::size_t red_killed = 0;
  std::size_t blue_killed = 0;
  /// Blue particles removed on reaching depth -blue_floor.
  std::size_t blue_pruned = 0;
  /// K of the sharp variant (0 otherwise).
  int K = 0;
  Population final_population;
};

/// floor(2 pi e^{A + d} a^{-3} e^{mu a}).
std::size_t coloured_count(double A, double d, double a);

/// Smallest integer K >= 1 with E_K <= delta/10.
int sharp_K(double delta);

BbbmResult run_barrier(const SimConfig& cfg, BarrierVariant variant, std::uint32_t replica);
inline BbbmResult run_bbbm(const SimConfig& cfg, std::uint32_t replica) {
  return run_barrier(cfg, BarrierVariant::Plain, replica);
}
inline BbbmResult run_bflat(const SimConfig& cfg, std::uint32_t replica) {
  return run_barrier(cfg, BarrierVariant::Flat, replica);
}
inline BbbmResult run_bsharp(const SimConfig& cfg, std::uint32_t replica, bool csharp = false) {
  return run_barrier(cfg, csharp ? BarrierVariant::CSharp : BarrierVariant::Sharp, replica);
}

}  // namespace bbmsel
