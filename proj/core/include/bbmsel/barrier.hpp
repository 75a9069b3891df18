#pragma once

#include <limits>
#include <vector>

#include "bbmsel/kernels.hpp"

namespace bbmsel {

/// One relaxation period [start, Theta) of the barrier process.
struct BarrierPiece {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  double start = 0.0;
  /// Shift value carried over from the previous piece.
  double base = 0.0;
  bool has_breakout = false;
  double T = kNaN;
  double T_plus = kNaN;
  double Delta = 0.0;
  /// Delta <= -1 cannot be installed; the piece keeps a constant shift.
  bool delta_rejected = false;
  bool closed = false;
  double Theta = kNaN;
  /// e^{-A} Z at Theta.
  double Z_Theta_scaled = kNaN;
  /// Particles still inside an open trial at Theta.
  std::size_t in_between = 0;
};

/// Piecewise barrier trajectory X(t) built from barrier_f.
class BarrierState {
 public:
  explicit BarrierState(double a, kernels::KernelAccuracy acc = {});

  double shift(double t) const;
  const std::vector<BarrierPiece>& pieces() const { return pieces_; }
  const BarrierPiece& current() const { return pieces_.back(); }

  /// Records the first breakout of the current piece and the shift installed from T_plus.
  void install(double T, double T_plus, double Delta, double A);
  /// Ends the current piece (now >= its Theta) and opens the next one at `now`.
  void close(double now, double Z_scaled, std::size_t in_between);

 private:
  double a_;
  kernels::KernelAccuracy acc_;
  std::vector<BarrierPiece> pieces_;
};

}  // namespace bbmsel
