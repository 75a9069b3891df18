#include "bbmsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbmsel/engine.hpp"
#include "bbmsel/errors.hpp"
#include "bbmsel/kernels.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/initial.hpp"
#include "bbmsel/rng.hpp"

namespace bbmsel::selection {

double med_alpha(std::span<const double> positions, double alpha, double N) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("med_alpha: alpha must lie in (0, 1)");
  if (!(N > 0)) throw DomainError("med_alpha: N must be > 0");
  const double target = alpha * N;
  // Smallest integer k >= alpha N, tolerant to rounding in the product.
  const double k_real = std::ceil(target - 1e-9 * std::max(1.0, target));
  const std::size_t k = static_cast<std::size_t>(std::max(1.0, k_real));
  if (k > positions.size()) return -std::numeric_limits<double>::infinity();
  std::vector<double> v(positions.begin(), positions.end());
  auto it = v.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(v.begin(), it, v.end(), std::greater<double>());
  return *it;
}

bool kill_order(const Particle& a, const Particle& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.label < b.label;
}

namespace {

// Removes the `excess` smallest particles in kill_order, keeping the survivors' relative order.
// Killed particles are appended to `killed` in kill order when it is non-null.
std::size_t select_in_place(std::vector<Particle>& ps, std::size_t N, std::vector<Particle>* killed) {
  if (ps.size() <= N) return 0;
  const std::size_t excess = ps.size() - N;
  thread_local std::vector<double> xs;
  xs.resize(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) xs[i] = ps[i].x;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(excess - 1), xs.end());
  const double cut = xs[excess - 1];
  std::size_t below = 0;
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].x < cut) ++below;
    else if (ps[i].x == cut) ties.push_back(i);
  }
  // Among particles sitting exactly at the cut, the smaller labels go first.
  std::sort(ties.begin(), ties.end(), [&](std::size_t a, std::size_t b) { return ps[a].label < ps[b].label; });
  ties.resize(excess - below);
  std::sort(ties.begin(), ties.end());
  auto next_tie = ties.begin();
  const std::size_t first_killed = killed ? killed->size() : 0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    bool dies = ps[i].x < cut;
    if (next_tie != ties.end() && *next_tie == i) {
      dies = true;
      ++next_tie;
    }
    if (dies) {
      if (killed) killed->push_back(std::move(ps[i]));
      continue;
    }
    if (kept != i) ps[kept] = std::move(ps[i]);
    ++kept;
  }
  ps.resize(kept);
  if (killed) std::sort(killed->begin() + static_cast<std::ptrdiff_t>(first_killed), killed->end(), kill_order);
  return excess;
}

}  // namespace

std::vector<Particle> apply_nbbm_selection(Population& pop, std::size_t N) {
  std::vector<Particle> killed;
  select_in_place(pop.particles, N, &killed);
  return killed;
}

namespace {

StatsSeries::Row make_row(const Population& pop, const std::vector<double>& alphas, double N) {
  StatsSeries::Row r;
  r.t = pop.time;
  const auto xs = pop.positions();
  for (double al : alphas) r.med.push_back(med_alpha(xs, al, N));
  r.count = static_cast<double>(xs.size());
  return r;
}

void move_all(std::vector<Particle>& ps, double h, double mu, Rng& rng) {
  const double sd = std::sqrt(h);
  for (auto& p : ps) p.x += -mu * h + sd * rng.normal();
}

// Free-space step [t0, t1]. Each particle carries its next branching time in aux,
// so a step costs one Gaussian per particle plus the work at actual branchings.
std::size_t free_step(std::vector<Particle>& ps, double t0, double t1, const ReproductionLaw& law, Rng& rng,
                      std::vector<Particle>& born, std::size_t cap) {
  const double beta = law.beta0();
  const double sd = std::sqrt(t1 - t0);
  std::size_t branchings = 0;
  born.clear();
  auto run = [&](Particle& p, double s) {
    while (p.aux <= t1) {
      p.x += std::sqrt(p.aux - s) * rng.normal();
      s = p.aux;
      const int k = law.sample(rng);
      ++branchings;
      if (k == 0) return false;
      const Label parent = p.label;
      for (int c = 2; c <= k; ++c) {
        Particle ch = p;
        ch.label = parent.child(static_cast<std::uint32_t>(c));
        ch.birth_time = s;
        ch.aux = s + rng.exponential(beta);
        born.push_back(std::move(ch));
      }
      p.label = parent.child(1);
      p.birth_time = s;
      p.aux = s + rng.exponential(beta);
      if (ps.size() + born.size() > cap) throw ResourceError("population cap exceeded");
    }
    p.x += (s == t0 ? sd : std::sqrt(t1 - s)) * rng.normal();
    return true;
  };
  std::size_t kept = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!run(ps[i], t0)) continue;
    if (kept != i) ps[kept] = std::move(ps[i]);
    ++kept;
  }
  ps.resize(kept);
  // Children continue from their birth time; they may branch again within the step.
  for (std::size_t j = 0; j < born.size(); ++j) {
    Particle c = std::move(born[j]);
    if (run(c, c.birth_time)) ps.push_back(std::move(c));
  }
  return branchings;
}

}  // namespace

NbbmResult run_nbbm(const SimConfig& cfg, std::uint32_t replica, Timing timing) {
  validate(cfg, Mode::Nbbm);
  const long N = *cfg.N;
  const auto rc = levy::recentering(N);
  const kernels::SinExpDensity init(rc.a_N, 1.0);
  Rng rng_init = rng_stream(cfg.seed, replica, lanes::initial);
  Rng rng = rng_stream(cfg.seed, replica, lanes::dynamics);

  NbbmResult res;
  res.series.alphas = cfg.alphas;
  Population pop = sample_population(static_cast<std::size_t>(N), init, rng_init);
  res.series.append(make_row(pop, cfg.alphas, static_cast<double>(N)));

  const double dt = cfg.dt.value_or(0.1);
  const std::size_t n_rec = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.record_interval));
  if (timing == Timing::StepEnd) {
    const double beta = cfg.law.beta0();
    for (auto& p : pop.particles) p.aux = rng.exponential(beta);
    std::vector<Particle> born;
    for (std::size_t r = 1; r <= n_rec; ++r) {
      const double t_rec = static_cast<double>(r) * cfg.record_interval;
      while (pop.time < t_rec) {
        const double t1 = std::min(t_rec, pop.time + dt);
        res.branchings += free_step(pop.particles, pop.time, t1, cfg.law, rng, born, cfg.population_cap);
        pop.time = t1;
        res.kills += select_in_place(pop.particles, static_cast<std::size_t>(N), nullptr);
      }
      pop.time = t_rec;
      res.series.append(make_row(pop, cfg.alphas, static_cast<double>(N)));
    }
  } else {
    const double beta = cfg.law.beta0();
    for (std::size_t r = 1; r <= n_rec; ++r) {
      const double t_rec = static_cast<double>(r) * cfg.record_interval;
      for (;;) {
        if (pop.particles.empty()) {
          pop.time = t_rec;
          break;
        }
        const double tau = rng.exponential(beta * static_cast<double>(pop.size()));
        if (pop.time + tau >= t_rec) {
          move_all(pop.particles, t_rec - pop.time, 0.0, rng);
          pop.time = t_rec;
          break;
        }
        move_all(pop.particles, tau, 0.0, rng);
        pop.time += tau;
        const std::size_t i = std::min(pop.size() - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(pop.size())));
        const int k = cfg.law.sample(rng);
        ++res.branchings;
        Particle parent = std::move(pop.particles[i]);
        pop.particles[i] = pop.particles.back();
        pop.particles.pop_back();
        for (int c = 1; c <= k; ++c) {
          Particle ch = parent;
          ch.label = parent.label.child(static_cast<std::uint32_t>(c));
          ch.birth_time = pop.time;
          pop.particles.push_back(std::move(ch));
        }
        res.kills += select_in_place(pop.particles, static_cast<std::size_t>(N), nullptr);
      }
      res.series.append(make_row(pop, cfg.alphas, static_cast<double>(N)));
    }
  }
  res.final_population = std::move(pop);
  return res;
}

std::vector<double> recentred(const StatsSeries& s, std::size_t alpha_index, double mu) {
  std::vector<double> out;
  out.reserve(s.rows.size());
  for (const auto& r : s.rows) out.push_back(r.med.at(alpha_index) - mu * r.t);
  return out;
}

}  // namespace bbmsel::selection
