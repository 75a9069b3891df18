#pragma once

#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <utility>
#include <vector>

#include "bbmsel/errors.hpp"
#include "bbmsel/population.hpp"
#include "bbmsel/reproduction.hpp"
#include "bbmsel/rng.hpp"

namespace bbmsel {

/// Probability that a Brownian bridge from x1 to x2 over time h touches level b.
double bridge_hit_probability(double x1, double x2, double b, double h);

/// Drift -mu - d/dt shift(t). The mean displacement over [t0, t1] is -integral(t0, t1).
struct Drift {
  double mu = 0.0;
  std::function<double(double)> shift;

  double integral(double t0, double t1) const {
    double v = mu * (t1 - t0);
    if (shift) v += shift(t1) - shift(t0);
    return v;
  }
};

struct Boundaries {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

enum class Side { Lower, Upper };

enum class HitAction { Remove, Continue };

struct AdvanceOptions {
  double dt = 0.01;
  std::size_t population_cap = 10'000'000;
  bool record_events = true;
};

struct AdvanceResult {
  std::vector<Event> events;
  std::size_t branches = 0;
  std::size_t deaths = 0;
  std::size_t absorbed_lower = 0;
  std::size_t absorbed_upper = 0;
};

/**
 * Moves one particle from `from` to `to`, splitting at branching times.
 *
 * Motion over each piece is an exact Gaussian step; boundary contact inside a
 * piece is detected with the bridge formula and the contact time is drawn
 * uniformly in the piece. Policy supplies:
 *   double mean_displacement(const Particle&, double s0, double s1)
 *   Boundaries bounds(const Particle&)
 *   HitAction on_hit(Particle&, Side, double time)   // may move/retag the particle
 *   void on_branch(const Particle& parent, int k, double time)
 *   void on_death(const Particle&, double time)
 *   void on_child(Particle& child)                   // optional retagging hook
 */
template <class Policy>
class ParticleRunner {
 public:
  ParticleRunner(const ReproductionLaw& law, Rng& rng, Policy& policy, std::size_t cap)
      : law_(law), rng_(rng), policy_(policy), cap_(cap) {}

  /// Survivors at time `to` are appended to `out`.
  void run(Particle p, double from, double to, std::vector<Particle>& out) {
    stack_.clear();
    stack_.emplace_back(std::move(p), from);
    drain(to, out, -1.0);
  }

  /**
   * Same law as run(), but a particle that neither branches nor meets a
   * boundary is updated in place and true is returned. Otherwise p is
   * consumed, its survivors go to `out`, and false is returned.
   */
  bool step_in_place(Particle& p, double from, double to, std::vector<Particle>& out) {
    const double rem = to - from;
    const double u = rng_.uniform();
    if (u < branch_probability(rem)) {
      stack_.clear();
      stack_.emplace_back(std::move(p), from);
      drain(to, out, u);
      return false;
    }
    const Boundaries bd = policy_.bounds(p);
    const double x2 = p.x + policy_.mean_displacement(p, from, to) + sqrt_step(rem) * rng_.normal();
    Side side = Side::Lower;
    double b = bd.lower;
    if (!check_hit(p.x, x2, bd.lower, rem)) {
      if (!check_hit(p.x, x2, bd.upper, rem)) {
        p.x = x2;
        return true;
      }
      side = Side::Upper;
      b = bd.upper;
    }
    double s = from;
    if (handle_hit(p, side, b, s, rem)) return false;
    stack_.clear();
    stack_.emplace_back(std::move(p), s);
    drain(to, out, -1.0);
    return false;
  }

  std::size_t branches() const { return branches_; }

 private:
  // u0 >= 0 is an already drawn branch-decision uniform for the first piece.
  void drain(double to, std::vector<Particle>& out, double u0) {
    while (!stack_.empty()) {
      auto [q, s] = std::move(stack_.back());
      stack_.pop_back();
      run_one(std::move(q), s, to, out, u0);
      u0 = -1.0;
    }
  }

  double branch_probability(double rem) {
    if (rem != cached_rem_) {
      cached_rem_ = rem;
      cached_p_ = -std::expm1(-law_.beta0() * rem);
      cached_sqrt_ = std::sqrt(rem);
    }
    return cached_p_;
  }

  double sqrt_step(double h) {
    branch_probability(h);
    return cached_sqrt_;
  }

  void run_one(Particle p, double s, double to, std::vector<Particle>& out, double u0) {
    const double beta = law_.beta0();
    for (;;) {
      const double rem = to - s;
      if (rem <= 0) {
        out.push_back(std::move(p));
        if (out.size() + stack_.size() > cap_) throw ResourceError("population cap exceeded");
        return;
      }
      double sub = rem;
      bool branch = false;
      const double u = u0 >= 0 ? u0 : rng_.uniform();
      u0 = -1.0;
      if (u < branch_probability(rem)) {
        sub = -std::log1p(-u) / beta;
        branch = true;
      }
      const Boundaries bd = policy_.bounds(p);
      const double x1 = p.x;
      const double x2 = x1 + policy_.mean_displacement(p, s, s + sub) + sqrt_step(sub) * rng_.normal();
      if (check_hit(x1, x2, bd.lower, sub)) {
        if (handle_hit(p, Side::Lower, bd.lower, s, sub)) return;
        continue;
      }
      if (check_hit(x1, x2, bd.upper, sub)) {
        if (handle_hit(p, Side::Upper, bd.upper, s, sub)) return;
        continue;
      }
      p.x = x2;
      s += sub;
      if (!branch) continue;
      const int k = law_.sample(rng_);
      if (k == 0) {
        policy_.on_death(p, s);
        return;
      }
      ++branches_;
      policy_.on_branch(p, k, s);
      const Label parent = p.label;
      p.label = parent.child(1);
      p.birth_time = s;
      for (int i = 2; i <= k; ++i) {
        Particle c = p;
        c.label = parent.child(static_cast<std::uint32_t>(i));
        policy_.on_child(c);
        stack_.emplace_back(std::move(c), s);
      }
      policy_.on_child(p);
      if (out.size() + stack_.size() > cap_) throw ResourceError("population cap exceeded");
    }
  }

  bool check_hit(double x1, double x2, double b, double h) {
    if (!std::isfinite(b)) return false;
    const double prod = (x1 - b) * (x2 - b);
    if (prod <= 0) return true;
    if (prod > 20.0 * h) return false;
    return rng_.uniform() < std::exp(-2.0 * prod / h);
  }

  // True when the particle is gone; otherwise p/s are updated to continue from the contact.
  bool handle_hit(Particle& p, Side side, double b, double& s, double sub) {
    const double th = s + rng_.uniform() * sub;
    p.x = b;
    if (policy_.on_hit(p, side, th) == HitAction::Remove) return true;
    s = th;
    return false;
  }

  const ReproductionLaw& law_;
  Rng& rng_;
  Policy& policy_;
  std::size_t cap_;
  std::size_t branches_ = 0;
  std::vector<std::pair<Particle, double>> stack_;
  double cached_rem_ = -1.0;
  double cached_p_ = 0.0;
  double cached_sqrt_ = 0.0;
};

/// One step of every particle in `ps` over [from, to]; `scratch` is reused storage.
template <class Policy>
void step_all(ParticleRunner<Policy>& runner, std::vector<Particle>& ps, double from, double to,
              std::vector<Particle>& scratch, std::size_t cap) {
  scratch.clear();
  std::size_t kept = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!runner.step_in_place(ps[i], from, to, scratch)) continue;
    if (kept != i) ps[kept] = std::move(ps[i]);
    ++kept;
  }
  ps.resize(kept);
  if (ps.size() + scratch.size() > cap) throw ResourceError("population cap exceeded");
  ps.insert(ps.end(), std::make_move_iterator(scratch.begin()), std::make_move_iterator(scratch.end()));
}

/// Advances every particle to `until` under a common drift with absorbing boundaries.
AdvanceResult advance(Population& pop, double until, const ReproductionLaw& law, const Drift& drift,
                      const Boundaries& bounds, const AdvanceOptions& opt, Rng& rng);

}  // namespace bbmsel
