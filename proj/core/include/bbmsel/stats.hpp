#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bbmsel/kernels.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/series.hpp"

namespace bbmsel::stats {

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Sample mean and its standard error (sd/sqrt(n), sd with n-1).
MeanSE mean_se(std::span<const double> xs);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  /// Normalised so that sum(density) * width == 1 over the points inside [lo, hi).
  std::vector<double> density;
  std::size_t inside = 0;
  std::size_t outside = 0;

  double width() const { return (hi - lo) / static_cast<double>(density.size()); }
  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
};

Histogram empirical_density(std::span<const double> xs, std::size_t bins, double lo, double hi);

/// Integral of |h - f| over [lo, hi].
double l1_distance(const Histogram& h, const std::function<double(double)>& f);
double l1_vs_meta(const Histogram& h, const kernels::IntervalParams& iv);
/// Largest |h_i - (bin average of f)| over bins.
double sup_distance(const Histogram& h, const std::function<double(double)>& f);

struct OracleReport {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double analytic = 0.0;
  double slack = 0.0;
  bool pass = false;
};

/// pass iff |estimate - analytic| <= slack + 3 se.
OracleReport verdict(std::string name, double estimate, double se, double analytic, double slack);

/// E[Z_t / Z_0] = 1.
OracleReport oracle_Z(std::span<const double> Z0, std::span<const double> Zt);
/// E[R_t] against pi t Z_0 / a^3 with slack C Y_0.
OracleReport oracle_R(std::span<const double> Z0, std::span<const double> Y0, std::span<const double> R, double t,
                      double a, double C);
/// E[N_t(r)] against 2 pi (1 + mu r) e^{mu(a-r)} Z_0/a^3 with slack (E + C (1+E)((1+r)/a)^2) times that.
OracleReport oracle_N(std::span<const double> Z0, std::span<const double> counts, double t, double r, double a,
                      double C);

/// 2 pi (1 + mu r) e^{mu(a-r)} / a^3.
double N_asymptotic_factor(double r, const kernels::IntervalParams& iv);
/// (2 e^{mu a}/a^2) int_r^a e^{-mu y} sin(pi y/a) dy, the leading term of E^x[N_t(r)]/w_Z(x).
double N_leading_factor(double r, const kernels::IntervalParams& iv);

/// sup over a grid of |I(u, [0, tau]) - pi tau sin(pi u)| on the unit interval.
double calibrate_R_constant();
/// sup over a grid of (|err| - E)_+ / ((1 + E)((1 + r)/a)^2) for the N_t(r) expansion.
double calibrate_N_constant();

struct SpeedEstimate {
  double slope = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;
};

/// Least-squares slope for t >= burn_in; the error comes from ten batch means.
SpeedEstimate speed_estimate(std::span<const double> t, std::span<const double> y, double burn_in);
/// Mean of per-replica least-squares slopes with the replica standard error.
SpeedEstimate speed_estimate(const std::vector<StatsSeries>& runs, std::size_t alpha_index, double burn_in);

struct CfPoint {
  double lambda = 0.0;
  std::complex<double> value;
  double se_re = 0.0;
  double se_im = 0.0;
  double se() const { return std::hypot(se_re, se_im); }
};

CfPoint empirical_cf(std::span<const double> samples, double lambda);

struct LevyComparison {
  double dt = 0.0;
  double c_fit = 0.0;
  std::vector<double> lambdas;
  std::vector<std::complex<double>> empirical;
  std::vector<std::complex<double>> model;
  std::vector<double> deviation;
  std::vector<double> se;
  bool pass = false;
};

/**
 * Compares increments over time dt with exp(dt kappa). When fit_c is set the
 * drift c is chosen by least squares on the phase residual, so only the
 * non-linear part of the exponent is tested.
 */
LevyComparison increment_vs_levy(std::span<const double> increments, double dt, std::span<const double> lambdas,
                                 const levy::LevyParams& lp, bool fit_c);

}  // namespace bbmsel::stats
