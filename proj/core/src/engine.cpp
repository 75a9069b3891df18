#include "bbmsel/engine.hpp"

#include <algorithm>

namespace bbmsel {

double bridge_hit_probability(double x1, double x2, double b, double h) {
  if (!(h > 0)) throw DomainError("bridge_hit_probability: h must be > 0");
  const double prod = (x1 - b) * (x2 - b);
  if (prod <= 0) return 1.0;
  return std::exp(-2.0 * prod / h);
}

namespace {

class AbsorbPolicy {
 public:
  AbsorbPolicy(const Drift& drift, const Boundaries& b, bool record, AdvanceResult& res)
      : drift_(drift), bounds_(b), record_(record), res_(res) {}

  void set_step(double t0, double t1) {
    t0_ = t0;
    t1_ = t1;
    step_disp_ = -drift_.integral(t0, t1);
  }

  double mean_displacement(const Particle&, double s0, double s1) const {
    if (s0 == t0_ && s1 == t1_) return step_disp_;
    if (!drift_.shift) return -drift_.mu * (s1 - s0);
    return -drift_.integral(s0, s1);
  }
  Boundaries bounds(const Particle&) const { return bounds_; }
  HitAction on_hit(Particle& p, Side side, double time) {
    if (side == Side::Lower) {
      ++res_.absorbed_lower;
      if (record_) res_.events.push_back({EventKind::AbsorbLo, time, p.label, p.x, 0});
    } else {
      ++res_.absorbed_upper;
      if (record_) res_.events.push_back({EventKind::AbsorbHi, time, p.label, p.x, 0});
    }
    return HitAction::Remove;
  }
  void on_branch(const Particle& p, int k, double time) {
    ++res_.branches;
    if (record_) res_.events.push_back({EventKind::Branch, time, p.label, p.x, k});
  }
  void on_death(const Particle& p, double time) {
    ++res_.deaths;
    if (record_) res_.events.push_back({EventKind::Branch, time, p.label, p.x, 0});
  }
  void on_child(Particle&) {}

 private:
  const Drift& drift_;
  Boundaries bounds_;
  bool record_;
  AdvanceResult& res_;
  double t0_ = 0, t1_ = 0, step_disp_ = 0;
};

}  // namespace

AdvanceResult advance(Population& pop, double until, const ReproductionLaw& law, const Drift& drift,
                      const Boundaries& bounds, const AdvanceOptions& opt, Rng& rng) {
  if (!(opt.dt > 0)) throw DomainError("advance: dt must be > 0");
  if (!(until > pop.time)) throw DomainError("advance: target time must follow the population time");
  AdvanceResult res;
  AbsorbPolicy policy(drift, bounds, opt.record_events, res);
  ParticleRunner<AbsorbPolicy> runner(law, rng, policy, opt.population_cap);
  thread_local std::vector<Particle> next;
  while (pop.time < until) {
    const double t1 = std::min(until, pop.time + opt.dt);
    policy.set_step(pop.time, t1);
    step_all(runner, pop.particles, pop.time, t1, next, opt.population_cap);
    pop.time = t1;
  }
  return res;
}

}  // namespace bbmsel
