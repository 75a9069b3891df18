#include "bbmsel/sim_config.hpp"

#include <cmath>
#include <numbers>

#include "bbmsel/errors.hpp"

namespace bbmsel {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Killed: return "killed";
    case Mode::Nbbm: return "nbbm";
    case Mode::Bbbm: return "bbbm";
    case Mode::Bflat: return "bflat";
    case Mode::Bsharp: return "bsharp";
    case Mode::Csharp: return "csharp";
    case Mode::Coupled: return "coupled";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::Killed, Mode::Nbbm, Mode::Bbbm, Mode::Bflat, Mode::Bsharp, Mode::Csharp, Mode::Coupled})
    if (s == to_string(m)) return m;
  throw DomainError("run.mode: unknown mode '" + s + "'");
}

double SimConfig::require_a(const char* who) const {
  if (!a) throw DomainError(std::string("interval.a: required by ") + who);
  return *a;
}

long SimConfig::require_N(const char* who) const {
  if (!N) throw DomainError(std::string("selection.N: required by ") + who);
  return *N;
}

double SimConfig::require_A(const char* who) const {
  if (!A) throw DomainError(std::string("bbbm.A: required by ") + who);
  return *A;
}

double SimConfig::step(double a_value) const {
  if (dt) return *dt;
  return a_value * a_value / 400.0;
}

namespace {

void positive(double v, const char* key) {
  if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(key) + ": must be finite and > 0");
}

}  // namespace

std::vector<std::string> validate(const SimConfig& cfg, Mode mode) {
  std::vector<std::string> warnings;
  if (cfg.dt) positive(*cfg.dt, "run.dt");
  positive(cfg.trial_dt, "run.trial_dt");
  positive(cfg.horizon, "run.horizon");
  positive(cfg.record_interval, "run.record_interval");
  if (cfg.replicas == 0) throw DomainError("run.replicas: must be >= 1");
  if (cfg.alphas.empty()) throw DomainError("selection.alpha: at least one value required");
  for (double al : cfg.alphas)
    if (!(al > 0 && al < 1)) throw DomainError("selection.alpha: values must lie in (0, 1)");

  const bool interval_mode = mode != Mode::Nbbm && mode != Mode::Coupled;
  if (interval_mode) {
    const double a = cfg.require_a(to_string(mode));
    if (!std::isfinite(a) || a < std::numbers::pi) throw DomainError("interval.a: must be >= pi");
    const double A = cfg.require_A(to_string(mode));
    if (!std::isfinite(A)) throw DomainError("bbbm.A: must be finite");
  } else {
    const long N = cfg.require_N(to_string(mode));
    if (N < 16) throw DomainError("selection.N: must be >= 16");
    if (cfg.minus_rule.offset > 0) throw DomainError("selection.minus_slack: must be <= 0");
    if (cfg.plus_rule.offset < 0) throw DomainError("selection.plus_slack: must be >= 0");
    if (N + cfg.minus_rule.offset < 1) throw DomainError("selection.minus_slack: leaves no particles");
  }

  const bool barrier_mode = mode == Mode::Bbbm || mode == Mode::Bflat || mode == Mode::Bsharp || mode == Mode::Csharp;
  if (barrier_mode) {
    const double A = *cfg.A;
    if (!cfg.epsilon) throw DomainError("bbbm.epsilon: required");
    if (!cfg.eta) throw DomainError("bbbm.eta: required");
    if (!cfg.y) throw DomainError("bbbm.y: required");
    if (!cfg.zeta) throw DomainError("bbbm.zeta: required");
    positive(*cfg.epsilon, "bbbm.epsilon");
    positive(*cfg.eta, "bbbm.eta");
    positive(*cfg.y, "bbbm.y");
    positive(*cfg.zeta, "bbbm.zeta");
    if (*cfg.y >= *cfg.a) throw DomainError("bbbm.y: must be < interval.a");
    if (!(*cfg.epsilon <= std::pow(A, -17.0)))
      warnings.push_back("bbbm.epsilon: violates epsilon <= A^-17 (asymptotic regime)");
    if (!(*cfg.epsilon >= std::exp(-A / 6.0)))
      warnings.push_back("bbbm.epsilon: violates epsilon >= e^{-A/6} (asymptotic regime)");
    if (!(*cfg.eta <= std::exp(-2.0 * A)))
      warnings.push_back("bbbm.eta: violates eta <= e^{-2A} (asymptotic regime)");
    if (mode != Mode::Bbbm && !(cfg.delta > 0 && cfg.delta < 0.01))
      throw DomainError("bbbm.delta: must lie in (0, 1/100)");
    if (cfg.blue_floor) positive(*cfg.blue_floor, "bbbm.blue_floor");
  }
  return warnings;
}

}  // namespace bbmsel
