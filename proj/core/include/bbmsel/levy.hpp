#pragma once

#include <complex>

namespace bbmsel {
class Rng;
}

namespace bbmsel::levy {

struct LevyParams {
  /// Linear drift of the exponent; the limit process fixes it only up to this constant.
  double c = 0.0;
  /// Jumps below this size are not sampled individually.
  double jump_truncation = 1e-3;
  double quadrature_tol = 1e-10;
  /// Replace the truncated small jumps by a variance-matched Gaussian.
  bool gaussian_small_jumps = true;

  void validate() const;
};

/// Log characteristic function of the limit increment over unit time.
std::complex<double> kappa(double lambda, const LevyParams& lp = {});

/// Exponent of the law actually produced by sample_levy_increment (truncated jumps).
std::complex<double> kappa_sampler(double lambda, const LevyParams& lp = {});

/// int_0^inf [log(1+x) 1{log(1+x) <= 1} - x 1{x <= 1}] x^{-2} dx.
double c_prime(double tol = 1e-12);

/// Lambda([u, inf)) = 1/(e^u - 1) for the image of x^{-2}dx under log(1+x).
double levy_tail(double u);

/// Precomputed compound-Poisson sampler.
class LevySampler {
 public:
  explicit LevySampler(const LevyParams& lp = {});
  double sample(double t, Rng& rng) const;

  /// Rate of jumps of size >= jump_truncation, including the pi^2 factor.
  double jump_rate() const { return rate_; }
  /// Drift per unit time compensating jumps in [jump_truncation, 1].
  double compensator_drift() const { return drift_; }
  /// Variance per unit time of the Gaussian standing in for small jumps.
  double small_jump_variance() const { return var_small_; }
  const LevyParams& params() const { return lp_; }

 private:
  LevyParams lp_;
  double rate_;
  double drift_;
  double var_small_;
};

double sample_levy_increment(double t, const LevyParams& lp, Rng& rng);

/// Root x >= 0 of (1 + x) e^{-x} = alpha, alpha in (0, 1].
double x_alpha(double alpha);

struct RecenteringConstants {
  long N = 0;
  double a_N = 0.0;
  double mu_N = 0.0;
  /// 1 - pi^2/(2 ln^2 N), the leading-order expansion of mu_N.
  double speed_leading = 0.0;
  /// speed_leading + 3 pi^2 ln ln N / ln^3 N.
  double speed_expanded = 0.0;
};

/// a_N = ln N + 3 ln ln N and mu_N = sqrt(1 - pi^2/a_N^2); N >= 16.
RecenteringConstants recentering(long N);

}  // namespace bbmsel::levy
