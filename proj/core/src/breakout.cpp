#include "bbmsel/breakout.hpp"

#include <algorithm>
#include <cmath>

#include "bbmsel/engine.hpp"
#include "bbmsel/errors.hpp"

namespace bbmsel {

void BreakoutParams::validate(const kernels::IntervalParams& iv) const {
  if (!(epsilon > 0)) throw DomainError("bbbm.epsilon: must be > 0");
  if (!(y > 0 && y < iv.a())) throw DomainError("bbbm.y: must lie in (0, a)");
  if (!(zeta > 0)) throw DomainError("bbbm.zeta: must be > 0");
  if (!(dt > 0)) throw DomainError("run.trial_dt: must be > 0");
  if (!std::isfinite(A)) throw DomainError("bbbm.A: must be finite");
}

namespace {

class TrialPolicy {
 public:
  TrialPolicy(const BreakoutParams& bp, const kernels::IntervalParams& iv, BreakoutOutcome& out, bool keep)
      : bp_(bp), iv_(iv), out_(out), keep_(keep) {}

  double mean_displacement(const Particle&, double s0, double s1) const { return -(s1 - s0); }
  Boundaries bounds(const Particle&) const { return {0.0, std::numeric_limits<double>::infinity()}; }
  HitAction on_hit(Particle& p, Side, double sigma) {
    const double pos = iv_.a() - bp_.y + (1.0 - iv_.mu()) * sigma;
    out_.Z += kernels::w_Z(pos, iv_);
    out_.Y += kernels::w_Y(pos, iv_);
    ++out_.stopped_count;
    out_.sigma_max = std::max(out_.sigma_max, sigma);
    if (keep_) out_.stopped_line.push_back({p.label, sigma, pos});
    return HitAction::Remove;
  }
  void on_branch(const Particle&, int, double) {}
  void on_death(const Particle&, double) {}
  void on_child(Particle&) {}

 private:
  const BreakoutParams& bp_;
  const kernels::IntervalParams& iv_;
  BreakoutOutcome& out_;
  bool keep_;
};

}  // namespace

BreakoutOutcome breakout_trial(const BreakoutParams& bp, const kernels::IntervalParams& iv,
                               const ReproductionLaw& law, Rng& rng, bool keep_line) {
  bp.validate(iv);
  BreakoutOutcome out;
  TrialPolicy policy(bp, iv, out, keep_line);
  ParticleRunner<TrialPolicy> runner(law, rng, policy, bp.work_cap);
  std::vector<Particle> live(1);
  live[0].x = bp.y;
  std::vector<Particle> next;
  double s = 0.0;
  std::size_t work = 0;
  try {
    while (!live.empty() && s < bp.zeta) {
      const double s1 = std::min(bp.zeta, s + bp.dt);
      step_all(runner, live, s, s1, next, bp.work_cap);
      s = s1;
      work += live.size();
      if (work > bp.work_cap) {
        out.capped = true;
        break;
      }
    }
  } catch (const ResourceError&) {
    // Treated like a lineage outliving zeta; the partial population is discarded.
    out.capped = true;
    out.sigma_exceeded = true;
    out.sigma_max = std::max(out.sigma_max, s);
    live.clear();
  }
  if (!live.empty()) {
    out.sigma_exceeded = true;
    out.sigma_max = std::max(out.sigma_max, s);
    const double line = iv.a() - bp.y + (1.0 - iv.mu()) * s;
    for (auto& p : live) {
      p.x += line;
      out.unfinished.push_back(std::move(p));
    }
  }
  out.W_y = bp.y * std::exp(-bp.y) * static_cast<double>(out.stopped_count);
  out.is_breakout = out.Z > bp.epsilon * std::exp(bp.A) || out.sigma_exceeded;
  return out;
}

}  // namespace bbmsel
