#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "bbmsel/errors.hpp"
#include "bbmsel/kernels.hpp"

using namespace bbmsel;
using namespace bbmsel::kernels;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double gk(F f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

// Direct image-sum heat kernel on (0, a) killed at both ends.
double p_killed_images(double x, double y, double t, double a) {
  double s = 0;
  for (int k = -40; k <= 40; ++k) {
    const double d1 = y - x + 2.0 * k * a;
    const double d2 = y + x + 2.0 * k * a;
    s += std::exp(-d1 * d1 / (2 * t)) - std::exp(-d2 * d2 / (2 * t));
  }
  return s / std::sqrt(2 * kPi * t);
}

}  // namespace

TEST(Theta, LargeTimeIsHalf) { EXPECT_NEAR(theta(0.5, 50), 0.5, 1e-12); }

TEST(Theta, RepresentationsAgree) {
  EXPECT_NEAR(theta(0.7, 0.5, {}, ThetaForm::Spectral), theta(0.7, 0.5, {}, ThetaForm::Gaussian), 1e-12);
  for (double t : {0.05, 0.3, 1.0, 5.0})
    for (double x = -2; x <= 2.0001; x += 0.25)
      EXPECT_NEAR(theta(x, t, {}, ThetaForm::Spectral), theta(x, t, {}, ThetaForm::Gaussian), 1e-12) << x << " " << t;
}

TEST(Theta, Periodic) { EXPECT_NEAR(theta(2.3, 1.0), theta(0.3, 1.0), 1e-14); }

TEST(Theta, RejectsNonPositiveTime) {
  EXPECT_THROW(theta(0.2, 0.0), DomainError);
  EXPECT_THROW(theta_prime(0.2, -1.0), DomainError);
}

TEST(ThetaPrime, VanishesAtIntegers) {
  EXPECT_NEAR(theta_prime(0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(theta_prime(1, 0.2), 0.0, 1e-12);
}

TEST(ThetaPrime, MatchesFiniteDifference) {
  const double h = 1e-5;
  const double fd = (theta(0.5 + h, 0.5) - theta(0.5 - h, 0.5)) / (2 * h);
  EXPECT_NEAR(theta_prime(0.5, 0.5), fd, 1e-7);
}

TEST(ThetaPrime, HeatEquation) {
  const double h = 1e-4;
  for (double t : {0.2, 0.5, 1.5})
    for (double x : {0.1, 0.4, 0.8}) {
      const double dt = (theta(x, t + h) - theta(x, t - h)) / (2 * h);
      EXPECT_NEAR(dt, 0.5 * theta_second(x, t), 1e-6);
    }
}

TEST(Thbar, Limits) {
  EXPECT_EQ(thbar(0), 0.0);
  EXPECT_EQ(thbar(-1), 0.0);
  EXPECT_NEAR(thbar(10), 1.0, 1e-6);
  EXPECT_LT(thbar(1), thbar(2));
  double prev = 0;
  for (double t = 0.01; t < 3; t += 0.05) {
    const double v = thbar(t);
    // Past t ~ 2.5 the deficit 1 - thbar drops below one ulp.
    if (t < 2.0) {
      EXPECT_GT(v, prev);
      EXPECT_LT(v, 1.0);
    }
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(ErrorEnvelope, DirectSeries) {
  long double s = 0;
  for (int n = 2; n < 60; ++n) s += static_cast<long double>(n) * n * std::exp(-kPi * kPi * (n * n - 1) * 0.5L);
  const double expected = static_cast<double>(s) * kPi * kPi;
  EXPECT_NEAR(error_envelope_E(1.0), expected, 1e-12 * expected);
  EXPECT_NEAR(error_envelope_E(1.0), 1.47e-5, 0.01e-5);
  EXPECT_LT(error_envelope_E(5), error_envelope_E(1));
  EXPECT_THROW(error_envelope_E(0), DomainError);
}

TEST(PKilled, EnvelopeHolds) {
  for (double a : {1.0, 4.0})
    for (double ts : {0.3, 0.6, 1.0, 2.0}) {
      const IntervalParams iv(a);
      const double t = ts * a * a;
      for (double u = 0.05; u < 1; u += 0.1)
        for (double v = 0.05; v < 1; v += 0.1) {
          const double s = (2 / a) * std::sin(kPi * u) * std::sin(kPi * v);
          const double lhs = std::abs(std::exp(kPi * kPi * t / (2 * a * a)) * p_killed(u * a, v * a, t, iv) - s);
          EXPECT_LE(lhs, error_envelope_E(ts) * std::abs(s) + 1e-14);
        }
    }
}

TEST(PKilled, BoundarySymmetryImages) {
  const IntervalParams iv(1.0);
  EXPECT_EQ(p_killed(0, 0.4, 1, iv), 0.0);
  EXPECT_EQ(p_killed(1, 0.4, 1, iv), 0.0);
  EXPECT_NEAR(p_killed(0.3, 0.6, 0.8, iv), p_killed(0.6, 0.3, 0.8, iv), 1e-15);
  for (double t : {0.01, 0.1, 0.29, 0.31, 1.0})
    EXPECT_NEAR(p_killed(0.3, 0.55, t, iv), p_killed_images(0.3, 0.55, t, 1.0), 1e-12) << t;
  EXPECT_THROW(p_killed(-0.1, 0.5, 1, iv), DomainError);
  EXPECT_THROW(p_killed(0.5, 1.1, 1, iv), DomainError);
}

TEST(PKilled, ChapmanKolmogorov) {
  const IntervalParams iv(1.0);
  for (auto [x, y] : {std::pair{0.3, 0.6}, std::pair{0.1, 0.9}, std::pair{0.5, 0.5}}) {
    const double lhs = gk([&](double z) { return p_killed(x, z, 0.4, iv) * p_killed(z, y, 0.4, iv); }, 0, 1);
    EXPECT_NEAR(lhs, p_killed(x, y, 0.8, iv), 1e-8);
  }
}

TEST(PKilled, ScaledMatchesUnscaled) {
  const IntervalParams iv(3.0);
  const double t = 2.0;
  EXPECT_NEAR(p_killed_scaled(1.0, 2.0, t, iv), std::exp(kPi * kPi * t / 18) * p_killed(1.0, 2.0, t, iv), 1e-13);
}

TEST(Green, ClosedForm) {
  const IntervalParams iv(1.0);
  EXPECT_NEAR(green_killed(0.3, 0.6, iv), 0.24, 1e-15);
  EXPECT_EQ(green_killed(0, 0.7, iv), 0.0);
  EXPECT_THROW(green_killed(0.3, 1.2, iv), DomainError);
}

TEST(Green, TimeQuadrature) {
  const IntervalParams iv(1.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double head = ts.integrate([&](double t) { return p_killed(0.3, 0.6, t, iv); }, 0.0, 1.0);
  const double tail = gk([&](double t) { return p_killed(0.3, 0.6, t, iv); }, 1.0, 80.0);
  EXPECT_NEAR(head + tail, 0.24, 1e-6);
}

TEST(Taboo, Conservative) {
  const IntervalParams iv(1.0);
  EXPECT_NEAR(gk([&](double y) { return p_taboo(0.4, y, 1.0, iv); }, 0, 1), 1.0, 1e-8);
  EXPECT_EQ(p_taboo(0.4, 0.0, 1.0, iv), 0.0);
  EXPECT_THROW(p_taboo(0.0, 0.5, 1.0, iv), DomainError);
  EXPECT_THROW(p_taboo(1.0, 0.5, 1.0, iv), DomainError);
}

TEST(Taboo, LargeTimeProfile) {
  const double a = 2.0;
  const IntervalParams iv(a);
  const double t = 5 * a * a;
  const double E = error_envelope_E(5.0);
  for (double x : {0.3, 1.0, 1.7})
    for (double y : {0.2, 0.9, 1.5}) {
      const double target = (2 / a) * std::pow(std::sin(kPi * y / a), 2);
      EXPECT_NEAR(p_taboo(x, y, t, iv), target, E * target + 1e-14);
    }
}

TEST(IIntegral, ScalingIsExact) {
  const double a = 3.0, u = 0.4;
  const double big = I_integral(a * u, {a * a * 0.5, a * a * 1.5}, IntervalParams(a));
  const double unit = I_integral(u, {0.5, 1.5}, IntervalParams(1.0));
  EXPECT_NEAR(big, unit, 1e-10);
  const double jb = J_integral(a * u, a * 0.7, {a * a * 0.2, a * a}, IntervalParams(a));
  const double ju = J_integral(u, 0.7, {0.2, 1.0}, IntervalParams(1.0));
  EXPECT_NEAR(jb / a, ju, 1e-10);
}

TEST(IIntegral, LeadingTermWithFittedConstant) {
  const IntervalParams iv(1.0);
  double C = 0;
  for (auto S : {TimeInterval{0.5, 1.5}, TimeInterval{1.0, 1.25}, TimeInterval{2.0, 4.0}, TimeInterval{0.3, 0.4}})
    for (double x = 0.05; x < 1; x += 0.1) {
      const double d = std::abs(I_integral(x, S, iv) - kPi * S.length() * std::sin(kPi * x));
      const double env = std::min(x, error_envelope_E(S.lo) * std::min(1.0, S.length()) * std::sin(kPi * x));
      C = std::max(C, d / env);
    }
  RecordProperty("C_I", std::to_string(C));
  EXPECT_LT(C, 2.0);
}

TEST(JIntegral, VanishesAtZero) { EXPECT_EQ(J_integral(0.3, 0.0, {0.1, 2.0}, IntervalParams(1.0)), 0.0); }

TEST(Weights, Examples) {
  const IntervalParams iv(10.0);
  EXPECT_NEAR(w_Z(10.0, iv), 0.0, 1e-13);
  EXPECT_EQ(w_Y(10.0, iv), 1.0);
  EXPECT_NEAR(w_Z(5.0, iv), 10.0 * std::exp(-iv.mu() * 5.0), 1e-13);
  EXPECT_EQ(w_Z(-1.0, iv), 0.0);
  EXPECT_EQ(w_Z(11.0, iv), 0.0);
}

TEST(BbmDensity, Definition) {
  const IntervalParams iv(2.0);
  const double expected = std::exp(iv.mu() * (0.4 - 0.7)) * std::exp(kPi * kPi / 8) * p_killed(0.4, 0.7, 1, iv);
  EXPECT_NEAR(bbm_density(0.4, 0.7, 1, iv), expected, 1e-12);
  EXPECT_EQ(bbm_density(0.4, 0.0, 1, iv), 0.0);
}

TEST(BbmDensity, ZIsHarmonic) {
  const IntervalParams iv(6.0);
  for (double x : {1.0, 3.0, 5.2}) {
    const double lhs = gk([&](double y) { return bbm_density(x, y, 4.0, iv) * w_Z(y, iv); }, 0, 6.0);
    EXPECT_NEAR(lhs, w_Z(x, iv), 1e-8 * std::max(1.0, w_Z(x, iv)));
  }
}

TEST(BarrierF, Examples) {
  EXPECT_EQ(barrier_f(1.7, 0), 0.0);
  EXPECT_EQ(barrier_f(0, 2.5), 0.0);
  EXPECT_NEAR(barrier_f(2, 10), 2.0, 1e-5);
  EXPECT_THROW(barrier_f(-1.0, 1.0), DomainError);
}

TEST(BarrierF, DropsByLessThanOne) {
  for (double x : {-0.99, -0.5, 0.5, 3.0})
    for (double s = 0; s < 3; s += 0.1)
      for (double t = s; t < 3; t += 0.1) EXPECT_GE(barrier_f(x, t) - barrier_f(x, s), -1.0);
}

TEST(MetaDensity, NormalisedAndSkewed) {
  const IntervalParams iv(15.0);
  const auto d = meta_density(iv);
  boost::math::quadrature::tanh_sinh<double> ts;
  EXPECT_NEAR(ts.integrate([&](double x) { return d(x); }, 0.0, 15.0), 1.0, 1e-10);
  EXPECT_NEAR(d(0), 0.0, 1e-15);
  EXPECT_NEAR(d(15.0), 0.0, 1e-15);
  double best = 0, arg = 0;
  for (double x = 0; x <= 15; x += 0.001)
    if (d(x) > best) best = d(x), arg = x;
  EXPECT_LT(arg, 7.5);
}

TEST(IntervalParams, Mu) {
  EXPECT_NEAR(IntervalParams(10).mu(), std::sqrt(1 - kPi * kPi / 100), 1e-15);
  EXPECT_EQ(IntervalParams(kPi).mu(), 0.0);
  EXPECT_THROW(IntervalParams(0.0), DomainError);
}

TEST(SelfCheck, Passes) {
  const auto rep = run_selfcheck();
  for (const auto& it : rep.items) EXPECT_TRUE(it.pass) << it.name << " worst " << it.worst;
  EXPECT_TRUE(rep.pass());
}
