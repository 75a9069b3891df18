#include "bbmsel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbmsel/errors.hpp"
#include "bbmsel/rng.hpp"
#include "quadrature.hpp"

namespace bbmsel::kernels {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr int kMaxTerms = 1000000;

bool use_spectral(double t, const KernelAccuracy& acc, ThetaForm form) {
  if (form == ThetaForm::Spectral) return true;
  if (form == ThetaForm::Gaussian) return false;
  return t >= acc.representation_switch_t;
}

void check_t(double t) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("theta: t must be finite and > 0");
}

// x reduced to [-1, 1] using 2-periodicity.
double reduce(double x) { return x - 2.0 * std::nearbyint(x / 2.0); }

// Gaussian image sum of g(z) phi_t(z) over z = x0 - 2n, stopping once both tails are small.
template <class G>
double image_sum(double x, double t, double stop, G&& g) {
  const double x0 = reduce(x);
  const double c = 1.0 / std::sqrt(2.0 * kPi * t);
  double sum = 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    double term = 0.0;
    bool small = true;
    for (int s : {1, -1}) {
      if (n == 0 && s == -1) continue;
      const double z = x0 - 2.0 * s * n;
      const double v = c * std::exp(-z * z / (2.0 * t)) * g(z);
      term += v;
      if (std::abs(v) >= stop || std::abs(z) < 2.0) small = false;
    }
    sum += term;
    if (small) return sum;
  }
  throw NumericError("theta image sum did not converge", stop);
}

}  // namespace

void KernelAccuracy::validate() const {
  if (!(series_truncation_tol > 0)) throw DomainError("kernel accuracy: series_truncation_tol must be > 0");
  if (!(representation_switch_t > 0)) throw DomainError("kernel accuracy: representation_switch_t must be > 0");
  if (!(quadrature_tol > 0)) throw DomainError("kernel accuracy: quadrature_tol must be > 0");
}

IntervalParams::IntervalParams(double a) : a_(a) {
  if (!std::isfinite(a) || !(a > 0)) throw DomainError("interval.a must be finite and > 0");
  mu_ = std::sqrt(std::max(0.0, 1.0 - kPi2 / (a * a)));
}

double theta(double x, double t, const KernelAccuracy& acc, ThetaForm form) {
  check_t(t);
  const double stop = acc.series_truncation_tol / 10.0;
  if (use_spectral(t, acc, form)) {
    double sum = 0.5;
    for (int n = 1; n < kMaxTerms; ++n) {
      const double e = std::exp(-kPi2 * n * n * t / 2.0);
      if (e < stop) return sum;
      sum += e * std::cos(kPi * n * x);
    }
    throw NumericError("theta spectral series did not converge", stop);
  }
  return image_sum(x, t, stop, [](double) { return 1.0; });
}

double theta_prime(double x, double t, const KernelAccuracy& acc, ThetaForm form) {
  check_t(t);
  const double stop = acc.series_truncation_tol / 10.0;
  if (use_spectral(t, acc, form)) {
    double sum = 0.0;
    for (int n = 1; n < kMaxTerms; ++n) {
      const double e = kPi * n * std::exp(-kPi2 * n * n * t / 2.0);
      if (e < stop && n * n * kPi2 * t > 1.0) return sum;
      sum -= e * std::sin(kPi * n * x);
    }
    throw NumericError("theta' spectral series did not converge", stop);
  }
  return image_sum(x, t, stop, [t](double z) { return -z / t; });
}

double theta_second(double x, double t, const KernelAccuracy& acc, ThetaForm form) {
  check_t(t);
  const double stop = acc.series_truncation_tol / 10.0;
  if (use_spectral(t, acc, form)) {
    double sum = 0.0;
    for (int n = 1; n < kMaxTerms; ++n) {
      const double e = kPi2 * n * n * std::exp(-kPi2 * n * n * t / 2.0);
      if (e < stop && n * n * kPi2 * t > 2.0) return sum;
      sum -= e * std::cos(kPi * n * x);
    }
    throw NumericError("theta'' spectral series did not converge", stop);
  }
  return image_sum(x, t, stop, [t](double z) { return (z * z / t - 1.0) / t; });
}

double thbar(double t, const KernelAccuracy& acc) {
  if (!(t > 0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  if (t >= acc.representation_switch_t) {
    double sum = 1.0;
    for (int n = 2; n < kMaxTerms; ++n) {
      const double e = n * n * std::exp(-kPi2 * (n * n - 1) * t / 2.0);
      if (e < acc.series_truncation_tol / 10.0) return sum;
      sum += (n % 2 == 0 ? -e : e);
    }
    throw NumericError("thbar series did not converge", 0.0);
  }
  const double v = std::exp(kPi2 * t / 2.0) * theta_second(1.0, t, acc, ThetaForm::Gaussian) / kPi2;
  return std::max(0.0, v);
}

double error_envelope_E(double t) {
  if (!(t > 0)) throw DomainError("E_t requires t > 0");
  if (std::isinf(t)) return 0.0;
  double sum = 0.0;
  for (int n = 2; n < kMaxTerms; ++n) {
    const double e = static_cast<double>(n) * n * std::exp(-kPi2 * (static_cast<double>(n) * n - 1.0) * t / 2.0);
    sum += e;
    if (e < 1e-17 * sum) return kPi2 * sum;
  }
  throw NumericError("E_t series did not converge", 0.0);
}

namespace {

void check_xy(double x, double y, double t, const IntervalParams& iv) {
  const double a = iv.a();
  if (!(x >= 0 && x <= a && y >= 0 && y <= a)) throw DomainError("killed kernel: x and y must lie in [0, a]");
  check_t(t);
}

// (2/a) sum exp(-pi^2 (n^2 - shift) tau/2) sin(pi n x/a) sin(pi n y/a)
double sine_series(double x, double y, double tau, double a, double shift, double tol) {
  double sum = 0.0;
  const double u = kPi * x / a;
  const double v = kPi * y / a;
  for (int n = 1; n < kMaxTerms; ++n) {
    const double e = std::exp(-kPi2 * (static_cast<double>(n) * n - shift) * tau / 2.0);
    if (e < tol && n > 1) return 2.0 / a * sum;
    sum += e * std::sin(n * u) * std::sin(n * v);
  }
  throw NumericError("sine series did not converge", tol);
}

}  // namespace

double p_killed(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc) {
  check_xy(x, y, t, iv);
  const double a = iv.a();
  if (x == 0 || x == a || y == 0 || y == a) return 0.0;
  const double tau = t / (a * a);
  if (tau >= acc.representation_switch_t)
    return sine_series(x, y, tau, a, 0.0, acc.series_truncation_tol / 10.0);
  const double d = theta((x - y) / a, tau, acc, ThetaForm::Gaussian) -
                   theta((x + y) / a, tau, acc, ThetaForm::Gaussian);
  return std::max(0.0, d / a);
}

double p_killed_scaled(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc) {
  check_xy(x, y, t, iv);
  const double a = iv.a();
  if (x == 0 || x == a || y == 0 || y == a) return 0.0;
  const double tau = t / (a * a);
  if (tau >= acc.representation_switch_t)
    return sine_series(x, y, tau, a, 1.0, acc.series_truncation_tol / 10.0);
  return std::exp(kPi2 * tau / 2.0) * p_killed(x, y, t, iv, acc);
}

double green_killed(double x, double y, const IntervalParams& iv) {
  const double a = iv.a();
  if (!(x >= 0 && x <= a && y >= 0 && y <= a)) throw DomainError("green_killed: x and y must lie in [0, a]");
  return 2.0 * std::min(x, y) * (a - std::max(x, y)) / a;
}

double p_taboo(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc) {
  const double a = iv.a();
  if (!(x > 0 && x < a)) throw DomainError("p_taboo: x must lie in (0, a)");
  return std::sin(kPi * y / a) / std::sin(kPi * x / a) * p_killed_scaled(x, y, t, iv, acc);
}

namespace {

// e^{pi^2 s/(2a^2)} r_hit(x, s)
double r_hit_scaled(double x, double s, const IntervalParams& iv, const KernelAccuracy& acc) {
  const double a = iv.a();
  const double tau = s / (a * a);
  const double z = x / a - 1.0;
  if (tau >= acc.representation_switch_t) {
    double sum = 0.0;
    for (int n = 1; n < kMaxTerms; ++n) {
      const double e = kPi * n * std::exp(-kPi2 * (static_cast<double>(n) * n - 1.0) * tau / 2.0);
      if (e < acc.series_truncation_tol / 10.0 && n > 1) return -sum / (a * a);
      sum += e * std::sin(kPi * n * z);
    }
    throw NumericError("hitting density series did not converge", 0.0);
  }
  return std::exp(kPi2 * tau / 2.0) * theta_prime(z, tau, acc, ThetaForm::Gaussian) / (a * a);
}

void check_window(TimeInterval S) {
  if (!(S.lo >= 0 && S.hi >= S.lo)) throw DomainError("time window must satisfy 0 <= lo <= hi");
  if (!std::isfinite(S.hi)) throw DomainError("time window must be bounded");
}

// Splits [lo, hi] at multiples of a^2/8 so that the adaptive rule sees smooth pieces.
template <class F>
double integrate_window(F&& f, TimeInterval S, double a, double tol, const char* what) {
  const double step = a * a / 8.0;
  double total = 0.0;
  double lo = S.lo;
  while (lo < S.hi) {
    // Snap so that a lo sitting on a grid point does not produce a sliver window.
    const double hi = std::min(S.hi, (std::floor(lo / step + 1e-9) + 1.0) * step);
    total += lo == 0.0 ? detail::integrate_from_zero(f, hi, tol, what) : detail::integrate(f, lo, hi, tol, what);
    lo = hi;
  }
  return total;
}

}  // namespace

double r_hit(double x, double t, const IntervalParams& iv, const KernelAccuracy& acc) {
  if (!(x >= 0 && x <= iv.a())) throw DomainError("r_hit: x must lie in [0, a]");
  check_t(t);
  if (x == 0) return 0.0;
  const double a = iv.a();
  return std::exp(-kPi2 * t / (2.0 * a * a)) * r_hit_scaled(x, t, iv, acc);
}

double I_integral(double x, TimeInterval S, const IntervalParams& iv, const KernelAccuracy& acc) {
  const double a = iv.a();
  if (!(x >= 0 && x <= a)) throw DomainError("I_integral: x must lie in [0, a]");
  check_window(S);
  if (x == 0 || S.hi == S.lo) return 0.0;
  if (x == a) return S.lo == 0 ? 1.0 : 0.0;
  auto f = [&](double s) { return s <= 0 ? 0.0 : r_hit_scaled(x, s, iv, acc); };
  return integrate_window(f, S, a, acc.quadrature_tol, "I_integral");
}

double J_integral(double x, double y, TimeInterval S, const IntervalParams& iv, const KernelAccuracy& acc) {
  const double a = iv.a();
  if (!(x >= 0 && x <= a && y >= 0 && y <= a)) throw DomainError("J_integral: x and y must lie in [0, a]");
  check_window(S);
  if (x == 0 || x == a || y == 0 || y == a || S.hi == S.lo) return 0.0;
  auto f = [&](double s) { return s <= 0 ? 0.0 : p_killed_scaled(x, y, s, iv, acc); };
  return integrate_window(f, S, a, acc.quadrature_tol, "J_integral");
}

double w_Z(double x, const IntervalParams& iv) {
  const double a = iv.a();
  if (!(x > 0 && x < a)) return 0.0;
  return a * std::exp(iv.mu() * (x - a)) * std::sin(kPi * x / a);
}

double w_Y(double x, const IntervalParams& iv) { return std::exp(iv.mu() * (x - iv.a())); }

double bbm_density(double x, double y, double t, const IntervalParams& iv, const KernelAccuracy& acc) {
  return std::exp(iv.mu() * (x - y)) * p_killed_scaled(x, y, t, iv, acc);
}

double barrier_f(double shift, double t, const KernelAccuracy& acc) {
  if (!(shift > -1.0) || !std::isfinite(shift)) throw DomainError("barrier_f: shift must be finite and > -1");
  return std::log1p(std::expm1(shift) * thbar(t, acc));
}

SinExpDensity::SinExpDensity(double a, double decay) : a_(a), decay_(decay) {
  if (!(a > 0) || !std::isfinite(a)) throw DomainError("SinExpDensity: a must be > 0");
  if (!std::isfinite(decay)) throw DomainError("SinExpDensity: decay must be finite");
  // int_0^a sin(pi x/a) e^{-c x} dx = (pi/a)(1 + e^{-c a}) / (c^2 + pi^2/a^2)
  const double k = kPi / a;
  norm_ = k * (1.0 + std::exp(-decay * a)) / (decay * decay + k * k);
}

double SinExpDensity::operator()(double x) const {
  if (!(x > 0 && x < a_)) return 0.0;
  return std::sin(kPi * x / a_) * std::exp(-decay_ * x) / norm_;
}

double SinExpDensity::cdf(double x) const {
  if (x <= 0) return 0.0;
  if (x >= a_) return 1.0;
  // Antiderivative of e^{-c x} sin(k x) is -e^{-c x}(c sin kx + k cos kx)/(c^2 + k^2).
  const double k = kPi / a_;
  const double c = decay_;
  auto F = [&](double u) { return -std::exp(-c * u) * (c * std::sin(k * u) + k * std::cos(k * u)) / (c * c + k * k); };
  return (F(x) - F(0.0)) / norm_;
}

double SinExpDensity::sample(Rng& rng) const {
  const double k = kPi / a_;
  if (decay_ * a_ > 1.0) {
    // Gamma(2, 1/decay) proposal dominates x e^{-decay x} >= sin(kx) e^{-decay x}/k.
    for (;;) {
      const double x = -(std::log(rng.uniform_open()) + std::log(rng.uniform_open())) / decay_;
      if (x >= a_) continue;
      if (rng.uniform() * k * x < std::sin(k * x)) return x;
    }
  }
  const double env = std::exp(std::max(0.0, -decay_) * a_);
  for (;;) {
    const double x = a_ * rng.uniform_open();
    if (rng.uniform() * env < std::sin(k * x) * std::exp(-decay_ * x)) return x;
  }
}

SinExpDensity meta_density(const IntervalParams& iv) { return SinExpDensity(iv.a(), iv.mu()); }

}  // namespace bbmsel::kernels
