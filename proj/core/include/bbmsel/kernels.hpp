#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bbmsel {
class Rng;
}

namespace bbmsel::kernels {

struct KernelAccuracy {
  double series_truncation_tol = 1e-14;
  /// Scaled time at and above which the spectral series is used.
  double representation_switch_t = 0.3;
  /// Relative tolerance passed to adaptive quadrature.
  double quadrature_tol = 1e-12;

  void validate() const;
};

/// Interval (0, a); mu = sqrt(1 - pi^2/a^2) is derived on construction.
/// Widths below pi are accepted for the driftless kernels and get mu = 0;
/// simulations still require a >= pi (see validate()).
class IntervalParams {
 public:
  explicit IntervalParams(double a);
  double a() const { return a_; }
  double mu() const { return mu_; }

 private:
  double a_;
  double mu_;
};

/// Closed time window [lo, hi] with 0 <= lo <= hi. hi may be +inf.
struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

enum class ThetaForm { Automatic, Spectral, Gaussian };

/// Periodised heat kernel: 1/2 + sum_n exp(-pi^2 n^2 t/2) cos(pi n x).
double theta(double x, double t, const KernelAccuracy& acc = {}, ThetaForm form = ThetaForm::Automatic);
double theta_prime(double x, double t, const KernelAccuracy& acc = {}, ThetaForm form = ThetaForm::Automatic);
double theta_second(double x, double t, const KernelAccuracy& acc = {}, ThetaForm form = ThetaForm::Automatic);

/// (1/pi^2) e^{pi^2 t/2} theta''(1, t); zero for t <= 0, increasing to 1.
double thbar(double t, const KernelAccuracy& acc = {});

/// pi^2 sum_{n>=2} n^2 exp(-pi^2 (n^2-1) t/2), t > 0.
double error_envelope_E(double t);

/// Density of BM started at x, killed on leaving (0, a), at y after time t.
double p_killed(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc = {});
/// e^{pi^2 t/(2a^2)} p_killed, evaluated without overflow or cancellation at large t.
double p_killed_scaled(double x, double y, double t, const IntervalParams& iv,
                       const KernelAccuracy& acc = {});
/// int_0^inf p_killed dt = 2 (x ^ y)(a - x v y)/a.
double green_killed(double x, double y, const IntervalParams& iv);
/// Transition density of BM conditioned to stay in (0, a) forever.
double p_taboo(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc = {});
/// Density of the hitting time of a before 0, started from x.
double r_hit(double x, double t, const IntervalParams& iv, const KernelAccuracy& acc = {});

/// int_S e^{pi^2 s/(2a^2)} r_hit(x, s) ds. S must be bounded.
double I_integral(double x, TimeInterval S, const IntervalParams& iv, const KernelAccuracy& acc = {});
/// int_S e^{pi^2 s/(2a^2)} p_killed(x, y, s) ds. S must be bounded.
double J_integral(double x, double y, TimeInterval S, const IntervalParams& iv,
                  const KernelAccuracy& acc = {});

double w_Z(double x, const IntervalParams& iv);
double w_Y(double x, const IntervalParams& iv);

/// Mean density of BBM (branching rate normalised so E#=e^{t/2}) with drift -mu killed outside (0,a).
double bbm_density(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc = {});

/// log(1 + (e^shift - 1) thbar(t)); requires shift > -1.
double barrier_f(double shift, double t, const KernelAccuracy& acc = {});

/// Normalised sin(pi x/a) e^{-decay x} on (0, a).
class SinExpDensity {
 public:
  SinExpDensity(double a, double decay);
  double operator()(double x) const;
  double a() const { return a_; }
  double decay() const { return decay_; }
  double normalization() const { return norm_; }
  double cdf(double x) const;
  double sample(Rng& rng) const;

 private:
  double a_;
  double decay_;
  double norm_;
};

/// The metastable profile sin(pi x/a) e^{-mu x}.
SinExpDensity meta_density(const IntervalParams& iv);

struct SelfCheckItem {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SelfCheckReport {
  std::vector<SelfCheckItem> items;
  double seconds = 0.0;
  bool pass() const;
};

/// Dual representation, heat equation and Green identity checks on a fixed grid.
SelfCheckReport run_selfcheck(const KernelAccuracy& acc = {});

}  // namespace bbmsel::kernels
