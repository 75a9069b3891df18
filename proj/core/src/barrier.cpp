#include "bbmsel/barrier.hpp"

#include <algorithm>
#include <cmath>

#include "bbmsel/errors.hpp"

namespace bbmsel {

BarrierState::BarrierState(double a, kernels::KernelAccuracy acc) : a_(a), acc_(acc) {
  pieces_.push_back(BarrierPiece{});
}

double BarrierState::shift(double t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const BarrierPiece& p) { return v < p.start; });
  if (it == pieces_.begin()) return 0.0;
  const BarrierPiece& p = *(it - 1);
  double tt = t;
  if (p.closed) tt = std::min(tt, p.Theta);
  if (!p.has_breakout || p.delta_rejected || tt <= p.T_plus) return p.base;
  return p.base + kernels::barrier_f(p.Delta, (tt - p.T_plus) / (a_ * a_), acc_);
}

void BarrierState::install(double T, double T_plus, double Delta, double A) {
  BarrierPiece& p = pieces_.back();
  if (p.has_breakout) throw DomainError("barrier: piece already has a breakout");
  if (!(T >= p.start && T_plus >= T)) throw DomainError("barrier: breakout times out of order");
  p.has_breakout = true;
  p.T = T;
  p.T_plus = T_plus;
  p.Delta = Delta;
  p.delta_rejected = !(Delta > -1.0) || !std::isfinite(Delta);
  p.Theta = std::max(T + std::exp(A) * a_ * a_, T_plus);
}

void BarrierState::close(double now, double Z_scaled, std::size_t in_between) {
  BarrierPiece& p = pieces_.back();
  if (!p.has_breakout) throw DomainError("barrier: closing a piece without breakout");
  if (now < p.Theta) throw DomainError("barrier: closing before Theta");
  BarrierPiece next;
  next.start = now;
  p.closed = true;
  p.Z_Theta_scaled = Z_scaled;
  p.in_between = in_between;
  next.base = shift(p.Theta);
  pieces_.push_back(next);
}

}  // namespace bbmsel
