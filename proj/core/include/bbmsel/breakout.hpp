#pragma once

#include <vector>

#include "bbmsel/kernels.hpp"
#include "bbmsel/population.hpp"
#include "bbmsel/reproduction.hpp"

namespace bbmsel {

struct BreakoutParams {
  double A = 0.0;
  double epsilon = 0.0;
  double y = 0.0;
  double zeta = 0.0;
  double dt = 0.05;
  std::size_t work_cap = 10'000'000;

  void validate(const kernels::IntervalParams& iv) const;
};

struct FrozenParticle {
  Label label;
  /// Time since the trial started.
  double sigma = 0.0;
  /// Position on the line a - y + (1 - mu) sigma.
  double position = 0.0;
};

struct BreakoutOutcome {
  std::vector<FrozenParticle> stopped_line;
  /// Lineages still above the line when the trial was cut at zeta (absolute positions).
  std::vector<Particle> unfinished;
  std::size_t stopped_count = 0;
  double Z = 0.0;
  double Y = 0.0;
  /// y e^{-y} times the number of stopped particles.
  double W_y = 0.0;
  double sigma_max = 0.0;
  /// Some lineage was still alive at zeta (or the work cap was hit).
  bool sigma_exceeded = false;
  bool capped = false;
  bool is_breakout = false;
};

/**
 * Descendants of one particle started at a, each stopped when it first meets
 * the line a - y + (1 - mu)(s - start). In coordinates relative to the line the
 * motion has drift -1 and stops at 0.
 */
BreakoutOutcome breakout_trial(const BreakoutParams& bp, const kernels::IntervalParams& iv,
                               const ReproductionLaw& law, Rng& rng, bool keep_line = true);

}  // namespace bbmsel
