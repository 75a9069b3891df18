#include "bbmsel/bbbm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "bbmsel/engine.hpp"
#include "bbmsel/errors.hpp"
#include "bbmsel/initial.hpp"
#include "bbmsel/kernels.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/selection.hpp"

namespace bbmsel {

std::size_t coloured_count(double A, double d, double a) {
  const kernels::IntervalParams iv(a);
  return hperp_count(A + d, iv);
}

int sharp_K(double delta) {
  if (!(delta > 0)) throw DomainError("bbbm.delta: must be > 0");
  for (int K = 1; K < 1000; ++K)
    if (kernels::error_envelope_E(K) <= delta / 10.0) return K;
  throw NumericError("sharp_K: no K below 1000", delta);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Trial {
  TrialRecord rec;
  double X_tau = 0.0;
  std::size_t alive = 1;
};

class BarrierSim {
 public:
  BarrierSim(const SimConfig& cfg, BarrierVariant variant, std::uint32_t replica)
      : cfg_(cfg),
        variant_(variant),
        iv_(*cfg.a),
        A_(*cfg.A),
        eps_(*cfg.epsilon),
        y_(*cfg.y),
        zeta_(*cfg.zeta),
        barrier_(*cfg.a),
        rng_(rng_stream(cfg.seed, replica, lanes::dynamics)) {
    Rng rng_init = rng_stream(cfg.seed, replica, lanes::initial);
    pop_ = sample_initial_Hperp(A_, iv_, rng_init, cfg.population_cap);
    res_.series.alphas = cfg.alphas;
    switch (variant_) {
      case BarrierVariant::Plain: res_.N_reference = pop_.size(); break;
      case BarrierVariant::Flat: res_.N_reference = coloured_count(A_, cfg.delta, iv_.a()); break;
      case BarrierVariant::Sharp:
      case BarrierVariant::CSharp:
        res_.N_reference = coloured_count(A_, -cfg.delta, iv_.a());
        res_.K = sharp_K(cfg.delta);
        interval_len_ = (res_.K + 3) * iv_.a() * iv_.a();
        blue_floor_ = cfg.blue_floor.value_or(iv_.a() / 2.0);
        break;
    }
  }

  BbbmResult run() {
    const double dt = cfg_.step(iv_.a());
    record();
    double next_rec = cfg_.record_interval;
    while (pop_.time < cfg_.horizon) {
      const double t1 = std::min({cfg_.horizon, next_rec, pop_.time + dt});
      step(pop_.time, t1);
      pop_.time = t1;
      after_step(t1);
      if (t1 >= next_rec - 1e-12 * next_rec) {
        record();
        next_rec += cfg_.record_interval;
      }
    }
    for (auto& tr : trials_) res_.trials.push_back(tr.rec);
    res_.barrier = barrier_;
    res_.final_population = std::move(pop_);
    return std::move(res_);
  }

  // Policy interface for ParticleRunner.
  double mean_displacement(const Particle& p, double s0, double s1) const {
    if (p.tag != 0) return -(s1 - s0);
    if (s0 == t0_ && s1 == t1_) return step_disp_;
    return -iv_.mu() * (s1 - s0) - (barrier_.shift(s1) - barrier_.shift(s0));
  }
  Boundaries bounds(const Particle& p) const {
    if (p.tag != 0) return {0.0, kInf};
    if (p.colour == Colour::Blue) return {-blue_floor_, iv_.a()};
    return {0.0, iv_.a()};
  }
  HitAction on_hit(Particle& p, Side side, double time) {
    if (p.tag != 0) return freeze(p, time);
    if (side == Side::Upper) {
      ++res_.hits_a;
      Trial tr;
      tr.rec.tau = time;
      tr.rec.eligible = !barrier_.current().has_breakout && time >= barrier_.current().start;
      tr.X_tau = barrier_.shift(time);
      trials_.push_back(tr);
      if (tr.rec.eligible) eligible_.push_back(trials_.size() - 1);
      p.tag = static_cast<std::uint32_t>(trials_.size());
      p.x = y_;
      return HitAction::Continue;
    }
    if (p.colour == Colour::Blue) {
      ++res_.blue_pruned;
      if (p.tag != 0) release_one(p.tag - 1, time);
      return HitAction::Remove;
    }
    const bool sharp = variant_ == BarrierVariant::Sharp || variant_ == BarrierVariant::CSharp;
    if (sharp && p.colour == Colour::White && right_of_zero_ < res_.N_reference) {
      p.colour = Colour::Blue;
      const double start = barrier_.current().start;
      const double n = std::floor((time - start) / interval_len_);
      p.aux = start + (n + 2.0) * interval_len_;
      return HitAction::Continue;
    }
    ++res_.absorbed;
    return HitAction::Remove;
  }
  void on_branch(const Particle& p, int k, double) {
    if (p.tag != 0) trials_[p.tag - 1].alive += static_cast<std::size_t>(k - 1);
  }
  void on_death(const Particle& p, double time) {
    if (p.tag != 0) release_one(p.tag - 1, time);
  }
  void on_child(Particle&) {}

 private:
  HitAction freeze(Particle& p, double time) {
    Trial& tr = trials_[p.tag - 1];
    const double sigma = time - tr.rec.tau;
    const double pos0 = iv_.a() - y_ + (1.0 - iv_.mu()) * sigma;
    tr.rec.Z += kernels::w_Z(pos0, iv_);
    tr.rec.Y += kernels::w_Y(pos0, iv_);
    ++tr.rec.stopped;
    tr.rec.sigma_max = std::max(tr.rec.sigma_max, sigma);
    p.x = pos0 - (barrier_.shift(time) - tr.X_tau);
    const std::uint32_t id = p.tag - 1;
    p.tag = 0;
    release_one(id, time);
    return HitAction::Continue;
  }

  void release_one(std::size_t id, double time) {
    Trial& tr = trials_[id];
    if (--tr.alive == 0) complete(tr, time);
  }

  void complete(Trial& tr, double) {
    tr.rec.done = true;
    tr.rec.breakout = tr.rec.Z > eps_ * std::exp(A_) || tr.rec.sigma_exceeded;
  }

  double line(const Trial& tr, double t) const {
    return iv_.a() - y_ + (1.0 - iv_.mu()) * (t - tr.rec.tau) - (barrier_.shift(t) - tr.X_tau);
  }

  double absolute(const Particle& p, double t) const {
    return p.tag == 0 ? p.x : p.x + line(trials_[p.tag - 1], t);
  }

  void step(double t0, double t1) {
    t0_ = t0;
    t1_ = t1;
    step_disp_ = -iv_.mu() * (t1 - t0) - (barrier_.shift(t1) - barrier_.shift(t0));
    right_of_zero_ = 0;
    for (const auto& p : pop_.particles)
      if (p.tag != 0 || p.x > 0) ++right_of_zero_;
    ParticleRunner<BarrierSim> runner(cfg_.law, rng_, *this, cfg_.population_cap);
    step_all(runner, pop_.particles, t0, t1, next_, cfg_.population_cap);
  }

  void after_step(double t) {
    hard_stop(t);
    resolve_breakout(t);
    if (variant_ == BarrierVariant::Flat) colour_flat(t);
    if (variant_ == BarrierVariant::Sharp || variant_ == BarrierVariant::CSharp) expire_blue(t, false);
    const BarrierPiece& cur = barrier_.current();
    if (cur.has_breakout && t >= cur.Theta) close_piece(t);
  }

  // Trials older than zeta release their remaining particles where they stand.
  void hard_stop(double t) {
    bool any = false;
    for (auto& tr : trials_)
      if (!tr.rec.done && t - tr.rec.tau >= zeta_) any = true;
    if (!any) return;
    for (auto& p : pop_.particles) {
      if (p.tag == 0) continue;
      Trial& tr = trials_[p.tag - 1];
      if (tr.rec.done || t - tr.rec.tau < zeta_) continue;
      p.x += line(tr, t);
      p.tag = 0;
      tr.rec.sigma_exceeded = true;
      tr.rec.sigma_max = std::max(tr.rec.sigma_max, t - tr.rec.tau);
      if (--tr.alive == 0) complete(tr, t);
    }
  }

  void resolve_breakout(double t) {
    if (barrier_.current().has_breakout) return;
    while (!eligible_.empty()) {
      Trial& tr = trials_[eligible_.front()];
      if (!tr.rec.done) return;
      if (!tr.rec.breakout) {
        eligible_.pop_front();
        continue;
      }
      const double Z = total_Z(t);
      const double Delta = std::log(std::exp(-A_) * Z);
      barrier_.install(tr.rec.tau, tr.rec.tau + tr.rec.sigma_max, Delta, A_);
      eligible_.clear();
      return;
    }
  }

  void close_piece(double t) {
    if (variant_ == BarrierVariant::Flat) {
      std::vector<Particle> keep;
      keep.reserve(pop_.size());
      for (auto& p : pop_.particles) {
        if (p.colour == Colour::Red) {
          ++res_.red_killed;
          if (p.tag != 0) release_one(p.tag - 1, t);
        } else {
          keep.push_back(std::move(p));
        }
      }
      pop_.particles.swap(keep);
    }
    if (variant_ == BarrierVariant::Sharp || variant_ == BarrierVariant::CSharp) expire_blue(t, true);
    std::size_t in_trial = 0;
    for (const auto& p : pop_.particles)
      if (p.tag != 0) ++in_trial;
    barrier_.close(t, std::exp(-A_) * total_Z(t), in_trial);
  }

  double total_Z(double t) const {
    double z = 0.0;
    for (const auto& p : pop_.particles) z += kernels::w_Z(absolute(p, t), iv_);
    return z;
  }

  std::vector<double> absolute_positions(double t, bool whites_only) const {
    std::vector<double> xs;
    xs.reserve(pop_.size());
    for (const auto& p : pop_.particles)
      if (!whites_only || p.colour == Colour::White) xs.push_back(absolute(p, t));
    return xs;
  }

  // Whites ranked from the right; rank >= N-flat turns red.
  void colour_flat(double t) {
    const std::size_t Nf = res_.N_reference;
    std::vector<std::pair<double, std::size_t>> whites;
    for (std::size_t i = 0; i < pop_.size(); ++i)
      if (pop_.particles[i].colour == Colour::White) whites.emplace_back(absolute(pop_.particles[i], t), i);
    if (whites.size() <= Nf) return;
    const std::size_t excess = whites.size() - Nf;
    auto less = [&](const auto& u, const auto& v) {
      if (u.first != v.first) return u.first < v.first;
      return pop_.particles[u.second].label < pop_.particles[v.second].label;
    };
    std::nth_element(whites.begin(), whites.begin() + static_cast<std::ptrdiff_t>(excess), whites.end(), less);
    for (std::size_t j = 0; j < excess; ++j) pop_.particles[whites[j].second].colour = Colour::Red;
  }

  void expire_blue(double t, bool piece_end) {
    std::vector<double> sorted;
    if (variant_ == BarrierVariant::CSharp) {
      sorted = absolute_positions(t, false);
      std::sort(sorted.begin(), sorted.end());
    }
    std::vector<Particle> keep;
    keep.reserve(pop_.size());
    bool changed = false;
    for (auto& p : pop_.particles) {
      if (p.colour != Colour::Blue || (!piece_end && p.aux > t)) {
        keep.push_back(std::move(p));
        continue;
      }
      changed = true;
      const double x = absolute(p, t);
      if (x >= 0) {
        p.colour = Colour::White;
        p.aux = 0.0;
        keep.push_back(std::move(p));
        continue;
      }
      if (variant_ == BarrierVariant::CSharp) {
        const auto right = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x));
        if (right < res_.N_reference) {
          p.aux = t + interval_len_;
          keep.push_back(std::move(p));
          continue;
        }
      }
      ++res_.blue_killed;
      if (p.tag != 0) release_one(p.tag - 1, t);
    }
    if (changed) pop_.particles.swap(keep);
  }

  void record() {
    const double t = pop_.time;
    StatsSeries::Row r;
    r.t = t;
    const bool whites_only = variant_ == BarrierVariant::Flat;
    const auto xs = absolute_positions(t, whites_only);
    for (double al : cfg_.alphas)
      r.med.push_back(selection::med_alpha(xs, al, static_cast<double>(res_.N_reference)));
    r.count = static_cast<double>(xs.size());
    double Z = 0, Y = 0;
    for (const auto& p : pop_.particles) {
      if (whites_only && p.colour != Colour::White) continue;
      const double x = absolute(p, t);
      Z += kernels::w_Z(x, iv_);
      Y += kernels::w_Y(x, iv_);
    }
    r.Z = Z;
    r.Y = Y;
    r.R_cum = static_cast<double>(res_.hits_a);
    r.barrier_shift = barrier_.shift(t);
    res_.series.append(std::move(r));
  }

  const SimConfig& cfg_;
  BarrierVariant variant_;
  kernels::IntervalParams iv_;
  double A_, eps_, y_, zeta_;
  BarrierState barrier_;
  Rng rng_;
  Population pop_;
  std::vector<Particle> next_;
  std::vector<Trial> trials_;
  std::deque<std::size_t> eligible_;
  BbbmResult res_;
  double interval_len_ = kInf;
  double blue_floor_ = kInf;
  double t0_ = 0, t1_ = 0, step_disp_ = 0;
  std::size_t right_of_zero_ = 0;
};

Mode mode_of(BarrierVariant v) {
  switch (v) {
    case BarrierVariant::Plain: return Mode::Bbbm;
    case BarrierVariant::Flat: return Mode::Bflat;
    case BarrierVariant::Sharp: return Mode::Bsharp;
    case BarrierVariant::CSharp: return Mode::Csharp;
  }
  return Mode::Bbbm;
}

}  // namespace

BbbmResult run_barrier(const SimConfig& cfg, BarrierVariant variant, std::uint32_t replica) {
  validate(cfg, mode_of(variant));
  BarrierSim sim(cfg, variant, replica);
  return sim.run();
}

}  // namespace bbmsel
