#include "bbmsel/levy.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "bbmsel/errors.hpp"
#include "bbmsel/rng.hpp"
#include "quadrature.hpp"

namespace bbmsel::levy {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
const double kSplit = std::numbers::e - 1.0;

// sin(z) - z without cancellation for small z.
double sin_minus_id(double z) {
  if (std::abs(z) < 1e-2) {
    const double z2 = z * z;
    return -z * z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
  }
  return std::sin(z) - z;
}

// cos(z) - 1 without cancellation.
double cos_minus_one(double z) {
  const double s = std::sin(z / 2.0);
  return -2.0 * s * s;
}

// Tail integrand in the original coordinate.
std::complex<double> tail_part(double lambda, double lo, double tol) {
  boost::math::quadrature::exp_sinh<double> es;
  auto re = [&](double v) {
    const double l = std::log1p(v);
    return cos_minus_one(lambda * l) / (v * v);
  };
  auto im = [&](double v) {
    const double l = std::log1p(v);
    return std::sin(lambda * l) / (v * v);
  };
  double err_re = 0, err_im = 0, l1 = 0;
  const double r = es.integrate(re, lo, std::numeric_limits<double>::infinity(), tol, &err_re, &l1);
  const double i = es.integrate(im, lo, std::numeric_limits<double>::infinity(), tol, &err_im, &l1);
  if (err_re > 1e3 * tol * std::max(1.0, std::abs(r)) || err_im > 1e3 * tol * std::max(1.0, std::abs(i)))
    throw NumericError("kappa tail quadrature", std::max(err_re, err_im));
  return {r, i};
}

// int_0^delta u^2 Lambda(du) = int_0^delta (u/2)^2 / sinh^2(u/2) du
double small_jump_second_moment(double delta) {
  auto f = [](double u) {
    if (u < 1e-8) return 1.0;
    const double s = std::sinh(u / 2.0);
    return (u / 2.0) * (u / 2.0) / (s * s);
  };
  return detail::integrate(f, 0.0, delta, 1e-13, "small jump variance");
}

// int_lo^hi u Lambda(du), antiderivative -u/(e^u - 1) + log(1 - e^{-u}).
double first_moment(double lo, double hi) {
  auto F = [](double u) { return -u / std::expm1(u) + std::log(-std::expm1(-u)); };
  return F(hi) - F(lo);
}

}  // namespace

void LevyParams::validate() const {
  if (!std::isfinite(c)) throw DomainError("levy.c must be finite");
  if (!(jump_truncation > 0 && jump_truncation < 1)) throw DomainError("levy.jump_truncation must lie in (0, 1)");
  if (!(quadrature_tol > 0)) throw DomainError("levy.quadrature_tol must be > 0");
}

std::complex<double> kappa(double lambda, const LevyParams& lp) {
  lp.validate();
  if (!std::isfinite(lambda)) throw DomainError("kappa: lambda must be finite");
  if (lambda == 0) return {0.0, 0.0};
  auto re = [&](double v) {
    if (v <= 0) return -lambda * lambda / 2.0;
    return cos_minus_one(lambda * std::log1p(v)) / (v * v);
  };
  auto im = [&](double v) {
    if (v <= 0) return 0.0;
    return sin_minus_id(lambda * std::log1p(v)) / (v * v);
  };
  const double head_re = detail::integrate(re, 0.0, kSplit, lp.quadrature_tol, "kappa head (re)", 1e-14);
  const double head_im = detail::integrate(im, 0.0, kSplit, lp.quadrature_tol, "kappa head (im)", 1e-14);
  const auto tail = tail_part(lambda, kSplit, lp.quadrature_tol);
  const std::complex<double> integral{head_re + tail.real(), head_im + tail.imag()};
  return std::complex<double>{0.0, lambda * lp.c} + kPi2 * integral;
}

std::complex<double> kappa_sampler(double lambda, const LevyParams& lp) {
  lp.validate();
  const LevySampler s(lp);
  const double d = lp.jump_truncation;
  // pi^2 int_d^inf (e^{i lambda u} - 1) Lambda(du), Lambda(du) = e^u/(e^u-1)^2 du
  auto dens = [](double u) {
    const double e = -std::expm1(-u);
    return std::exp(-u) / (e * e);
  };
  auto re = [&](double u) { return cos_minus_one(lambda * u) * dens(u); };
  auto im = [&](double u) { return std::sin(lambda * u) * dens(u); };
  boost::math::quadrature::exp_sinh<double> es;
  double r = detail::integrate(re, d, 1.0, 1e-12, "kappa_sampler", 1e-14);
  double i = detail::integrate(im, d, 1.0, 1e-12, "kappa_sampler", 1e-14);
  r += es.integrate(re, 1.0, std::numeric_limits<double>::infinity(), 1e-12);
  i += es.integrate(im, 1.0, std::numeric_limits<double>::infinity(), 1e-12);
  const double drift = lp.c + s.compensator_drift();
  return std::complex<double>{-0.5 * lambda * lambda * s.small_jump_variance(), lambda * drift} +
         kPi2 * std::complex<double>{r, i};
}

double c_prime(double tol) {
  auto head = [](double x) {
    if (x < 1e-6) return -0.5 + 2.0 * x / 3.0;
    return (std::log1p(x) - x) / (x * x);
  };
  auto mid = [](double x) { return std::log1p(x) / (x * x); };
  return detail::integrate(head, 0.0, 1.0, tol, "c_prime") + detail::integrate(mid, 1.0, kSplit, tol, "c_prime");
}

double levy_tail(double u) {
  if (!(u > 0)) throw DomainError("levy_tail: u must be > 0");
  return 1.0 / std::expm1(u);
}

LevySampler::LevySampler(const LevyParams& lp) : lp_(lp) {
  lp_.validate();
  const double d = lp_.jump_truncation;
  rate_ = kPi2 * levy_tail(d);
  drift_ = -kPi2 * first_moment(d, 1.0);
  var_small_ = lp_.gaussian_small_jumps ? kPi2 * small_jump_second_moment(d) : 0.0;
}

double LevySampler::sample(double t, Rng& rng) const {
  if (!(t >= 0) || !std::isfinite(t)) throw DomainError("levy increment: t must be finite and >= 0");
  if (t == 0) return 0.0;
  const double em = std::expm1(lp_.jump_truncation);
  const long n = rng.poisson(rate_ * t);
  double jumps = 0.0;
  for (long k = 0; k < n; ++k) jumps += std::log1p(em / rng.uniform_open());
  double v = (lp_.c + drift_) * t + jumps;
  if (var_small_ > 0) v += std::sqrt(var_small_ * t) * rng.normal();
  return v;
}

double sample_levy_increment(double t, const LevyParams& lp, Rng& rng) { return LevySampler(lp).sample(t, rng); }

double x_alpha(double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("x_alpha: alpha must lie in (0, 1]");
  if (alpha == 1) return 0.0;
  auto g = [alpha](double x) { return (1.0 + x) * std::exp(-x) - alpha; };
  double hi = 1.0;
  while (g(hi) > 0) hi *= 2.0;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double x = 0.5 * (r.first + r.second);
  if (std::abs(g(x)) > 1e-12) throw NumericError("x_alpha root", std::abs(g(x)));
  return x;
}

RecenteringConstants recentering(long N) {
  if (N < 16) throw DomainError("recentering: N must be >= 16");
  RecenteringConstants rc;
  rc.N = N;
  const double l = std::log(static_cast<double>(N));
  rc.a_N = l + 3.0 * std::log(l);
  rc.mu_N = std::sqrt(1.0 - kPi2 / (rc.a_N * rc.a_N));
  rc.speed_leading = 1.0 - kPi2 / (2.0 * l * l);
  rc.speed_expanded = rc.speed_leading + 3.0 * kPi2 * std::log(l) / (l * l * l);
  return rc;
}

}  // namespace bbmsel::levy
