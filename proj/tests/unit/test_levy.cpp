#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "bbmsel/errors.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/stats.hpp"

using namespace bbmsel;
using namespace bbmsel::levy;

namespace {

constexpr double kPi = std::numbers::pi;

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

std::vector<double> draws(const LevyParams& lp, double t, std::size_t n, std::uint32_t replica) {
  Rng rng = rng_stream(11, replica, lanes::levy);
  LevySampler s(lp);
  std::vector<double> out(n);
  for (auto& v : out) v = s.sample(t, rng);
  return out;
}

}  // namespace

TEST(Kappa, Basics) {
  EXPECT_EQ(kappa(0.0), std::complex<double>(0, 0));
  for (double l = -4; l <= 4; l += 0.25) EXPECT_LE(kappa(l).real(), 1e-12) << l;
  EXPECT_LE(kappa(1.5).real(), 0.0);
  const auto k1 = kappa(0.7), k2 = kappa(-0.7);
  EXPECT_NEAR(k1.real(), k2.real(), 1e-12);
  EXPECT_NEAR(k1.imag(), -k2.imag(), 1e-12);
}

TEST(Kappa, DriftIsLinear) {
  LevyParams lp;
  lp.c = 0.8;
  EXPECT_NEAR((kappa(1.3, lp) - kappa(1.3)).imag(), 0.8 * 1.3, 1e-12);
  EXPECT_NEAR((kappa(1.3, lp) - kappa(1.3)).real(), 0.0, 1e-12);
}

TEST(LevyTail, MatchesImageDensity) {
  boost::math::quadrature::exp_sinh<double> es;
  for (double u : {0.1, 0.5, 1.0, 2.0}) {
    const double q = es.integrate([](double v) { return std::exp(-v) / std::pow(std::expm1(-v), 2); }, u,
                                  std::numeric_limits<double>::infinity());
    EXPECT_NEAR(levy_tail(u), q, 1e-10 * std::max(1.0, q));
  }
  EXPECT_THROW(levy_tail(0.0), DomainError);
}

TEST(CPrime, NegativeAndStable) {
  const double c = c_prime();
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_LT(c, 0.0);
  EXPECT_LT(std::abs(c_prime(5e-13) - c), 1e-12);

  // Independent evaluation split at 1 and e - 1.
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double e1 = std::numbers::e - 1;
  const double head = GK::integrate([](double x) { return x < 1e-8 ? -0.5 : (std::log1p(x) - x) / (x * x); }, 0.0,
                                    1.0, 15, 1e-14);
  const double mid = GK::integrate([](double x) { return std::log1p(x) / (x * x); }, 1.0, e1, 15, 1e-14);
  EXPECT_NEAR(head + mid, c, 1e-10);
  EXPECT_NEAR(c, -0.04065185, 1e-7);
}

TEST(LevySampler, CharacteristicFunction) {
  const auto xs = draws({}, 1.0, 30000, 0);
  for (double l : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    const auto cf = stats::empirical_cf(xs, l);
    EXPECT_LE(std::abs(cf.value - std::exp(kappa(l))), 3 * cf.se()) << l;
  }
}

TEST(LevySampler, SamplerExponentCloseToLimit) {
  for (double l : {0.5, 1.0, 2.0}) EXPECT_LT(std::abs(kappa_sampler(l) - kappa(l)), 1e-3) << l;
  LevyParams raw;
  raw.gaussian_small_jumps = false;
  EXPECT_EQ(LevySampler(raw).small_jump_variance(), 0.0);
}

TEST(LevySampler, MeanIsLinearInTime) {
  std::vector<double> rate;
  std::vector<double> se;
  for (double t : {0.1, 0.2, 0.4}) {
    const auto xs = draws({}, t, 40000, static_cast<std::uint32_t>(10 * t));
    const auto m = stats::mean_se(xs);
    rate.push_back(m.mean / t);
    se.push_back(m.se / t);
  }
  EXPECT_NEAR(rate[0], rate[1], 3 * std::hypot(se[0], se[1]));
  EXPECT_NEAR(rate[0], rate[2], 3 * std::hypot(se[0], se[2]));
}

TEST(LevySampler, JumpsArePositive) {
  LevyParams lp;
  lp.gaussian_small_jumps = false;
  LevySampler s(lp);
  Rng rng = rng_stream(5, 0, lanes::levy);
  const double t = 0.3;
  const double drift = (lp.c + s.compensator_drift()) * t;
  for (int i = 0; i < 20000; ++i) {
    const double v = s.sample(t, rng) - drift;
    // Either no jump, or a sum of jumps each at least the truncation size.
    EXPECT_TRUE(std::abs(v) < 1e-12 || v >= lp.jump_truncation - 1e-12) << v;
  }
}

TEST(LevySampler, Additive) {
  const auto two = draws({}, 0.5, 20000, 1);
  const auto a = draws({}, 0.25, 20000, 2);
  const auto b = draws({}, 0.25, 20000, 3);
  std::vector<double> sum(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
  const double n = 20000;
  EXPECT_LT(ks_statistic(two, sum), 1.628 * std::sqrt(2 / n));
}

TEST(LevySampler, ZeroTime) {
  Rng rng = rng_stream(1, 0, 0);
  EXPECT_EQ(sample_levy_increment(0.0, {}, rng), 0.0);
  EXPECT_THROW(sample_levy_increment(-1.0, {}, rng), DomainError);
}

TEST(XAlpha, Examples) {
  EXPECT_EQ(x_alpha(1.0), 0.0);
  EXPECT_NEAR(x_alpha(2 / std::numbers::e), 1.0, 1e-12);
  const double x = x_alpha(0.37);
  EXPECT_LE(std::abs((1 + x) * std::exp(-x) - 0.37), 1e-12);
  EXPECT_THROW(x_alpha(0.0), DomainError);
  EXPECT_THROW(x_alpha(1.1), DomainError);
}

TEST(XAlpha, Decreasing) {
  double prev = x_alpha(0.01);
  for (double al = 0.02; al < 1; al += 0.01) {
    const double x = x_alpha(al);
    EXPECT_LT(x, prev);
    prev = x;
  }
}

TEST(Recentering, Constants) {
  const auto rc = recentering(10000);
  const double l = std::log(10000.0);
  const double aN = l + 3 * std::log(l);
  EXPECT_DOUBLE_EQ(rc.a_N, aN);
  EXPECT_NEAR(rc.a_N, 15.87132, 1e-5);
  EXPECT_NEAR(rc.mu_N, 0.98022, 1e-5);
  EXPECT_NEAR(rc.speed_leading, 1 - kPi * kPi / (2 * l * l), 1e-15);
  EXPECT_NEAR(rc.speed_expanded, rc.speed_leading + 3 * kPi * kPi * std::log(l) / (l * l * l), 1e-15);
  for (long N : {16L, 100L, 100000L, 100000000L}) EXPECT_LT(recentering(N).mu_N, 1.0);
  EXPECT_THROW(recentering(10), DomainError);
}
