#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbmsel/reproduction.hpp"

namespace bbmsel {

enum class Mode { Killed, Nbbm, Bbbm, Bflat, Bsharp, Csharp, Coupled };

const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

/// Selection rule for the outer systems of a coupled run: keep at most N + offset particles.
struct CapRule {
  long offset = 0;
};

struct SimConfig {
  ReproductionLaw law = ReproductionLaw::binary();

  // Physical parameters have no defaults.
  std::optional<double> a;
  std::optional<long> N;
  std::optional<double> A;

  std::optional<double> epsilon;
  std::optional<double> eta;
  std::optional<double> y;
  std::optional<double> zeta;
  /// Offset of the coloured variants.
  double delta = 0.005;
  /// Depth below 0 at which blue particles are discarded; unset means a/2.
  std::optional<double> blue_floor;

  /// Time step; unset means a^2/400 for interval modes and 0.1 for N-BBM.
  std::optional<double> dt;
  double trial_dt = 0.05;
  double horizon = 1.0;
  double record_interval = 1.0;
  std::vector<double> alphas{0.5};
  std::size_t population_cap = 10'000'000;
  /// Particle-steps allowed inside one breakout trial.
  std::size_t trial_work_cap = 10'000'000;

  std::uint64_t seed = 1;
  std::size_t replicas = 1;

  /// Recentre by a_N (false) or by a_N - A (true).
  bool recentre_minus_A = false;

  CapRule plus_rule{0};
  CapRule minus_rule{0};
  /// Event index at which a coupled run deliberately breaks the ordering; negative disables.
  long inject_fault_at = -1;
  /// Per-event ordering check in coupled runs.
  bool check_every_event = true;

  double require_a(const char* who) const;
  long require_N(const char* who) const;
  double require_A(const char* who) const;
  double step(double a_value) const;
};

/**
 * Checks the fields a mode needs. Throws DomainError naming the offending
 * key path; returns non-fatal warnings.
 */
std::vector<std::string> validate(const SimConfig& cfg, Mode mode);

}  // namespace bbmsel
