#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bbmsel/population.hpp"
#include "bbmsel/series.hpp"
#include "bbmsel/sim_config.hpp"

namespace bbmsel::selection {

/// inf{x : #{atoms >= x} < alpha N}; -inf when fewer than ceil(alpha N) atoms exist.
double med_alpha(std::span<const double> positions, double alpha, double N);

/// Total order used for killing: by position, ties broken by label (smaller label dies first).
bool kill_order(const Particle& a, const Particle& b);

/// Removes the leftmost particles until at most N remain; returns the removed ones.
std::vector<Particle> apply_nbbm_selection(Population& pop, std::size_t N);

enum class Timing {
  /// Select after every time step of length dt.
  StepEnd,
  /// Event-driven: every particle moves between branchings and selection acts at each branching.
  BranchEvents,
};

struct NbbmResult {
  StatsSeries series;
  std::size_t kills = 0;
  std::size_t branchings = 0;
  Population final_population;
};

/// N-BBM started from N iid points with density proportional to sin(pi x/a_N) e^{-x}.
NbbmResult run_nbbm(const SimConfig& cfg, std::uint32_t replica, Timing timing = Timing::StepEnd);

/// Recentred series M(t) = med(t) - mu t.
std::vector<double> recentred(const StatsSeries& s, std::size_t alpha_index, double mu);

}  // namespace bbmsel::selection
