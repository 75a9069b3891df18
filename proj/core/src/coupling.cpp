#include "bbmsel/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbmsel/errors.hpp"
#include "bbmsel/initial.hpp"
#include "bbmsel/kernels.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/selection.hpp"

namespace bbmsel {
namespace {

constexpr std::size_t kMaxRewireLog = 100000;
constexpr int kNone = -1;

struct Slot {
  Label label;
  double x = 0.0;       // position for the forest, offset for followers
  int partner = kNone;  // followers: index of the leader; leaders: index of the follower
  int follower = kNone;
  bool alive = false;
};

// Slot arena with a dense list of live indices.
class Arena {
 public:
  int add(Slot s) {
    s.alive = true;
    int id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      slots_[id] = std::move(s);
    } else {
      id = static_cast<int>(slots_.size());
      slots_.push_back(std::move(s));
      where_.push_back(0);
    }
    where_[id] = live_.size();
    live_.push_back(id);
    return id;
  }
  void remove(int id) {
    Slot& s = slots_[id];
    s.alive = false;
    s.label = Label();
    const std::size_t w = where_[id];
    live_[w] = live_.back();
    where_[live_[w]] = w;
    live_.pop_back();
    free_.push_back(id);
  }
  Slot& operator[](int id) { return slots_[id]; }
  const Slot& operator[](int id) const { return slots_[id]; }
  const std::vector<int>& live() const { return live_; }
  std::size_t size() const { return live_.size(); }

 private:
  std::vector<Slot> slots_;
  std::vector<std::size_t> where_;
  std::vector<int> live_;
  std::vector<int> free_;
};

class Coupled {
 public:
  Coupled(const SimConfig& cfg, std::uint32_t replica)
      : cfg_(cfg),
        N_(static_cast<std::size_t>(*cfg.N)),
        cap_plus_(static_cast<std::size_t>(*cfg.N + cfg.plus_rule.offset)),
        cap_minus_(static_cast<std::size_t>(*cfg.N + cfg.minus_rule.offset)),
        rng_(rng_stream(cfg.seed, replica, lanes::dynamics)) {
    const auto rc = levy::recentering(*cfg.N);
    const kernels::SinExpDensity init(rc.a_N, 1.0);
    Rng rng_init = rng_stream(cfg.seed, replica, lanes::initial);
    const Population pop = sample_population(N_, init, rng_init);
    for (const auto& p : pop.particles) {
      const int v = plus_.add({p.label, p.x});
      const int u = mid_.add({p.label, 0.0, v});
      plus_[v].follower = u;
      const int w = minus_.add({p.label, 0.0, u});
      mid_[u].follower = w;
    }
    // Initial minus system obeys its own cap.
    select_minus(0.0);
    for (auto* s : {&res_.plus, &res_.middle, &res_.minus}) s->alphas = cfg.alphas;
  }

  CoupledResult run() {
    const double beta = cfg_.law.beta0();
    check(0.0);
    record(0.0);
    double t = 0.0;
    const auto n_rec = static_cast<std::size_t>(std::llround(cfg_.horizon / cfg_.record_interval));
    for (std::size_t r = 1; r <= n_rec; ++r) {
      const double t_rec = static_cast<double>(r) * cfg_.record_interval;
      for (;;) {
        if (plus_.size() == 0) {
          t = t_rec;
          break;
        }
        const double tau = rng_.exponential(beta * static_cast<double>(plus_.size()));
        if (t + tau >= t_rec) {
          move_all(t_rec - t);
          t = t_rec;
          break;
        }
        move_all(tau);
        t += tau;
        branch_event(t);
        ++res_.events;
        if (cfg_.inject_fault_at >= 0 && res_.events == static_cast<std::size_t>(cfg_.inject_fault_at)) inject_fault();
        if (cfg_.check_every_event) check(t);
      }
      check(t);
      record(t);
    }
    return std::move(res_);
  }

 private:
  double mid_pos(int u) const { return plus_[mid_[u].partner].x - mid_[u].x; }
  double minus_pos(int w) const { return mid_pos(minus_[w].partner) - minus_[w].x; }

  void move_all(double h) {
    const double sd = std::sqrt(h);
    for (int v : plus_.live()) plus_[v].x += sd * rng_.normal();
  }

  void branch_event(double t) {
    const auto& live = plus_.live();
    const std::size_t pick = std::min(live.size() - 1, static_cast<std::size_t>(rng_.uniform() * static_cast<double>(live.size())));
    const int v = live[pick];
    const int k = cfg_.law.sample(rng_);
    const int u = plus_[v].follower;
    const int w = u == kNone ? kNone : mid_[u].follower;
    if (k == 0) {
      if (w != kNone) minus_.remove(w);
      if (u != kNone) mid_.remove(u);
      plus_.remove(v);
    } else {
      const Label lv = plus_[v].label;
      const Label lu = u == kNone ? Label() : mid_[u].label;
      const Label lw = w == kNone ? Label() : minus_[w].label;
      plus_[v].label = lv.child(1);
      if (u != kNone) mid_[u].label = lu.child(1);
      if (w != kNone) minus_[w].label = lw.child(1);
      for (int i = 2; i <= k; ++i) {
        const auto ci = static_cast<std::uint32_t>(i);
        const int v2 = plus_.add({lv.child(ci), plus_[v].x});
        if (u == kNone) continue;
        const int u2 = mid_.add({lu.child(ci), mid_[u].x, v2});
        plus_[v2].follower = u2;
        if (w == kNone) continue;
        const int w2 = minus_.add({lw.child(ci), minus_[w].x, u2});
        mid_[u2].follower = w2;
      }
    }
    select_minus(t);
    select_middle(t);
    select_plus(t);
  }

  template <class PosFn>
  int leftmost(const Arena& a, PosFn pos) const {
    int best = kNone;
    double bx = 0.0;
    for (int id : a.live()) {
      const double x = pos(id);
      if (best == kNone || x < bx || (x == bx && a[id].label < a[best].label)) {
        best = id;
        bx = x;
      }
    }
    return best;
  }

  // Leftmost leader without a follower at or right of `x0`.
  template <class PosFn>
  int free_right_of(const Arena& a, PosFn pos, double x0, int exclude) const {
    int best = kNone;
    double bx = 0.0;
    for (int id : a.live()) {
      if (id == exclude || a[id].follower != kNone) continue;
      const double x = pos(id);
      if (x < x0) continue;
      if (best == kNone || x < bx || (x == bx && a[id].label < a[best].label)) {
        best = id;
        bx = x;
      }
    }
    return best;
  }

  void select_minus(double) {
    while (minus_.size() > cap_minus_) {
      const int w = leftmost(minus_, [&](int id) { return minus_pos(id); });
      mid_[minus_[w].partner].follower = kNone;
      minus_.remove(w);
    }
  }

  void select_middle(double t) {
    while (mid_.size() > N_) {
      const auto pos = [&](int id) { return mid_pos(id); };
      const int u = leftmost(mid_, pos);
      const int w = mid_[u].follower;
      if (w != kNone) {
        const double xu = mid_pos(u);
        const int u2 = free_right_of(mid_, pos, xu, u);
        if (u2 == kNone) throw CouplingViolation("no free N-BBM particle right of a killed partner");
        const double xw = minus_pos(w);
        const double x2 = mid_pos(u2);
        log_rewire(t, CouplingLevel::Minus, minus_[w].label, mid_[u].label, mid_[u2].label, xu, x2);
        minus_[w].partner = u2;
        minus_[w].x = x2 - xw;
        mid_[u2].follower = w;
      }
      plus_[mid_[u].partner].follower = kNone;
      mid_.remove(u);
    }
  }

  void select_plus(double t) {
    while (plus_.size() > cap_plus_) {
      const auto pos = [&](int id) { return plus_[id].x; };
      const int v = leftmost(plus_, pos);
      const int u = plus_[v].follower;
      if (u != kNone) {
        const double xv = plus_[v].x;
        const int v2 = free_right_of(plus_, pos, xv, v);
        if (v2 == kNone) throw CouplingViolation("no free N-plus particle right of a killed partner");
        const double xu = mid_pos(u);
        log_rewire(t, CouplingLevel::Middle, mid_[u].label, plus_[v].label, plus_[v2].label, xv, plus_[v2].x);
        mid_[u].partner = v2;
        mid_[u].x = plus_[v2].x - xu;
        plus_[v2].follower = u;
      }
      plus_.remove(v);
    }
  }

  void log_rewire(double t, CouplingLevel level, const Label& who, const Label& old_p, const Label& new_p,
                  double old_x, double new_x) {
    if (new_x < old_x) throw CouplingViolation("rewiring target lies left of the killed partner");
    ++res_.rewire_count;
    if (res_.rewires.size() < kMaxRewireLog) res_.rewires.push_back({t, level, who, old_p, new_p, old_x, new_x});
  }

  void inject_fault() {
    if (mid_.size() == 0) return;
    mid_[mid_.live().front()].x = -1.0;
  }

  void check(double t) {
    ++res_.checks;
    for (int u : mid_.live()) {
      const Slot& s = mid_[u];
      if (!(s.x >= 0)) throw CouplingViolation("N-BBM particle right of its N-plus partner at t=" + format_real(t));
      if (s.partner == kNone || !plus_[s.partner].alive || plus_[s.partner].follower != u)
        throw CouplingViolation("N-BBM to N-plus map not injective at t=" + format_real(t));
    }
    for (int w : minus_.live()) {
      const Slot& s = minus_[w];
      if (!(s.x >= 0)) throw CouplingViolation("N-minus particle right of its N-BBM partner at t=" + format_real(t));
      if (s.partner == kNone || !mid_[s.partner].alive || mid_[s.partner].follower != w)
        throw CouplingViolation("N-minus to N-BBM map not injective at t=" + format_real(t));
    }
    if (minus_.size() > cap_minus_ || mid_.size() > N_ || plus_.size() > cap_plus_)
      throw CouplingViolation("population above its cap at t=" + format_real(t));
  }

  void record(double t) {
    std::vector<double> xp, xm, xn;
    for (int v : plus_.live()) xp.push_back(plus_[v].x);
    for (int u : mid_.live()) xm.push_back(mid_pos(u));
    for (int w : minus_.live()) xn.push_back(minus_pos(w));
    auto row = [&](const std::vector<double>& xs) {
      StatsSeries::Row r;
      r.t = t;
      for (double al : cfg_.alphas) r.med.push_back(selection::med_alpha(xs, al, static_cast<double>(N_)));
      r.count = static_cast<double>(xs.size());
      return r;
    };
    res_.plus.append(row(xp));
    res_.middle.append(row(xm));
    res_.minus.append(row(xn));
  }

  const SimConfig& cfg_;
  std::size_t N_, cap_plus_, cap_minus_;
  Rng rng_;
  Arena plus_, mid_, minus_;
  CoupledResult res_;
};

}  // namespace

CoupledResult run_coupled(const SimConfig& cfg, std::uint32_t replica) {
  validate(cfg, Mode::Coupled);
  Coupled c(cfg, replica);
  return c.run();
}

}  // namespace bbmsel
