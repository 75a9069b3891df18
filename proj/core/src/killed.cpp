#include "bbmsel/killed.hpp"

#include <algorithm>
#include <cmath>

#include "bbmsel/engine.hpp"
#include "bbmsel/errors.hpp"
#include "bbmsel/initial.hpp"
#include "bbmsel/kernels.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/selection.hpp"

namespace bbmsel {
namespace {

KilledSnapshot snapshot(const Population& pop, const kernels::IntervalParams& iv, double R, const KilledOptions& opt) {
  KilledSnapshot s;
  s.t = pop.time;
  s.R_cum = R;
  s.count = pop.size();
  s.count_above.assign(opt.levels.size(), 0);
  for (const auto& p : pop.particles) {
    s.Z += kernels::w_Z(p.x, iv);
    s.Y += kernels::w_Y(p.x, iv);
    for (std::size_t j = 0; j < opt.levels.size(); ++j)
      if (p.x >= opt.levels[j]) ++s.count_above[j];
  }
  if (opt.keep_positions) s.positions = pop.positions();
  return s;
}

}  // namespace

KilledResult run_killed(const SimConfig& cfg, std::uint32_t replica, const KilledOptions& opt) {
  if (opt.start_x) {
    const double a = cfg.require_a("killed");
    if (!(*opt.start_x > 0 && *opt.start_x < a)) throw DomainError("killed: start must lie in (0, a)");
  }
  validate(cfg, Mode::Killed);
  if (!std::is_sorted(opt.snapshot_times.begin(), opt.snapshot_times.end()))
    throw DomainError("killed: snapshot times must be sorted");
  const kernels::IntervalParams iv(*cfg.a);
  Rng rng_init = rng_stream(cfg.seed, replica, lanes::initial);
  Rng rng = rng_stream(cfg.seed, replica, lanes::dynamics);

  Population pop;
  if (opt.start_x) {
    Particle p;
    p.label = Label().child(1);
    p.x = *opt.start_x;
    pop.particles.push_back(std::move(p));
  } else {
    pop = sample_initial_Hperp(*cfg.A, iv, rng_init, cfg.population_cap);
  }

  KilledResult res;
  res.N0 = pop.size();
  for (const auto& p : pop.particles) {
    res.Z0 += kernels::w_Z(p.x, iv);
    res.Y0 += kernels::w_Y(p.x, iv);
  }
  res.series.alphas = cfg.alphas;
  const double Nref = static_cast<double>(std::max<std::size_t>(1, res.N0));
  auto row = [&](double R) {
    StatsSeries::Row r;
    r.t = pop.time;
    const auto xs = pop.positions();
    for (double al : cfg.alphas) r.med.push_back(selection::med_alpha(xs, al, Nref));
    r.count = static_cast<double>(xs.size());
    r.Z = 0;
    r.Y = 0;
    for (double x : xs) {
      r.Z += kernels::w_Z(x, iv);
      r.Y += kernels::w_Y(x, iv);
    }
    r.R_cum = R;
    return r;
  };

  const Drift drift{iv.mu(), {}};
  const Boundaries bounds{0.0, iv.a()};
  const AdvanceOptions aopt{cfg.step(iv.a()), cfg.population_cap, opt.keep_events};
  double R = 0.0;
  if (opt.record_series) res.series.append(row(R));

  // Merge snapshot and record times into one schedule.
  std::vector<double> stops = opt.snapshot_times;
  if (opt.record_series)
    for (double t = cfg.record_interval; t <= cfg.horizon * (1 + 1e-12); t += cfg.record_interval) stops.push_back(t);
  stops.push_back(cfg.horizon);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  std::size_t snap = 0;
  double next_rec = cfg.record_interval;
  for (double t : stops) {
    if (t > cfg.horizon * (1 + 1e-12)) break;
    if (t > pop.time) {
      const auto ar = advance(pop, t, cfg.law, drift, bounds, aopt, rng);
      R += static_cast<double>(ar.absorbed_upper);
      if (opt.keep_events) res.events.insert(res.events.end(), ar.events.begin(), ar.events.end());
    }
    while (snap < opt.snapshot_times.size() && opt.snapshot_times[snap] <= t) {
      res.snapshots.push_back(snapshot(pop, iv, R, opt));
      ++snap;
    }
    if (opt.record_series && t >= next_rec * (1 - 1e-12)) {
      res.series.append(row(R));
      next_rec += cfg.record_interval;
    }
  }
  return res;
}

}  // namespace bbmsel
