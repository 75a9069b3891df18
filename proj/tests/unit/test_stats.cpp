#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "bbmsel/errors.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/stats.hpp"

using namespace bbmsel;
using namespace bbmsel::stats;

TEST(MeanSE, Basic) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = mean_se(xs);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.se, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_THROW(mean_se({}), DomainError);
}

TEST(Verdict, Formula) {
  EXPECT_TRUE(verdict("x", 1.3, 0.1, 1.0, 0.0).pass);
  EXPECT_FALSE(verdict("x", 1.31, 0.1, 1.0, 0.0).pass);
  EXPECT_TRUE(verdict("x", 1.5, 0.1, 1.0, 0.2).pass);
  EXPECT_FALSE(verdict("x", 0.49, 0.1, 1.0, 0.2).pass);
  const auto r = verdict("name", 2.0, 0.5, 1.0, 0.25);
  EXPECT_EQ(r.name, "name");
  EXPECT_EQ(r.estimate, 2.0);
  EXPECT_EQ(r.se, 0.5);
  EXPECT_EQ(r.analytic, 1.0);
  EXPECT_EQ(r.slack, 0.25);
}

TEST(EmpiricalDensity, MetaSample) {
  const kernels::IntervalParams iv(15.0);
  const auto d = kernels::meta_density(iv);
  Rng rng = rng_stream(30, 0, lanes::aux);
  std::vector<double> xs(400000);
  for (auto& x : xs) x = d.sample(rng);
  const auto h = empirical_density(xs, 100, 0.0, 15.0);
  double total = 0;
  for (double v : h.density) total += v * h.width();
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(h.inside, xs.size());
  const double l1 = l1_vs_meta(h, iv);
  EXPECT_LE(l1, 0.05);
  EXPECT_GE(l1, 0.0);
}

TEST(EmpiricalDensity, UniformIsFar) {
  const double a = 15.0;
  const kernels::IntervalParams iv(a);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back((i + 0.5) * a / 100000);
  const auto h = empirical_density(xs, 50, 0.0, a);
  const auto d = kernels::meta_density(iv);
  const double exact = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return std::abs(1 / a - d(x)); }, 0.0, a, 15, 1e-12);
  EXPECT_GT(exact, 0.2);
  EXPECT_GT(l1_vs_meta(h, iv), 0.2);
  EXPECT_NEAR(l1_vs_meta(h, iv), exact, 0.02);
  EXPECT_LE(l1_vs_meta(h, iv), 2.0);
}

TEST(EmpiricalDensity, Errors) {
  const std::vector<double> xs{1.0, 2.0};
  EXPECT_THROW(empirical_density(xs, 5, 0, 3), DomainError);
  EXPECT_THROW(empirical_density({}, 20, 0, 3), DomainError);
}

TEST(SupDistance, BinAverage) {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back((i + 0.5) / 1000.0);
  const auto h = empirical_density(xs, 10, 0.0, 1.0);
  EXPECT_NEAR(sup_distance(h, [](double) { return 1.0; }), 0.0, 1e-12);
  EXPECT_NEAR(sup_distance(h, [](double x) { return 2 * x; }), 0.9, 1e-9);
}

TEST(Oracles, RequireReplicas) {
  const std::vector<double> z(10, 1.0);
  EXPECT_THROW(oracle_Z(z, z), DomainError);
  const std::vector<double> z0(40, 2.0), zt(40, 2.0);
  const auto r = oracle_Z(z0, zt);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.estimate, 1.0);
}

TEST(Oracles, RAndNAnalyticValues) {
  const double a = 10.0, t = 50.0;
  const std::vector<double> Z0(40, 3.0), Y0(40, 0.5), R(40, 0.0), counts(40, 0.0);
  const auto rr = oracle_R(Z0, Y0, R, t, a, 1.0);
  EXPECT_NEAR(rr.analytic, std::numbers::pi * t * 3.0 / (a * a * a), 1e-14);
  EXPECT_NEAR(rr.slack, 0.5, 1e-14);
  const kernels::IntervalParams iv(a);
  const double mu = iv.mu();
  const auto rn = oracle_N(Z0, counts, 200.0, 2.5, a, 1.0);
  const double factor = 2 * std::numbers::pi * (1 + mu * 2.5) * std::exp(mu * 7.5) / (a * a * a);
  EXPECT_NEAR(rn.analytic, factor * 3.0, 1e-12);
  EXPECT_NEAR(N_asymptotic_factor(2.5, iv), factor, 1e-14);
}

TEST(Oracles, LeadingFactorByQuadrature) {
  const kernels::IntervalParams iv(10.0);
  const double mu = iv.mu();
  for (double r : {0.0, 2.5, 6.0}) {
    const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double y) { return std::exp(-mu * y) * std::sin(std::numbers::pi * y / 10.0); }, r, 10.0, 15, 1e-14);
    EXPECT_NEAR(N_leading_factor(r, iv), 2 * std::exp(mu * 10) / 100.0 * q, 1e-10 * N_leading_factor(r, iv));
  }
  // The leading factor tends to the asymptotic one as a grows with r fixed.
  const kernels::IntervalParams big(200.0);
  EXPECT_NEAR(N_leading_factor(0.0, big) / N_asymptotic_factor(0.0, big), 1.0, 0.01);
}

TEST(Speed, SyntheticLine) {
  std::vector<double> t, y;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i);
    y.push_back(0.9 * i);
  }
  const auto s = speed_estimate(t, y, 10.0);
  EXPECT_NEAR(s.slope, 0.9, 1e-12);
  EXPECT_NEAR(s.se, 0.0, 1e-12);
  EXPECT_THROW(speed_estimate(t, y, 60.0), DomainError);
}

TEST(Speed, DriftlessWalk) {
  Rng rng = rng_stream(31, 0, lanes::aux);
  std::vector<StatsSeries> runs;
  for (int r = 0; r < 40; ++r) {
    StatsSeries s;
    s.alphas = {0.5};
    double x = 0;
    for (int i = 0; i <= 200; ++i) {
      s.append({static_cast<double>(i), {x}, 1.0});
      x += rng.normal();
    }
    runs.push_back(std::move(s));
  }
  const auto s = speed_estimate(runs, 0, 20.0);
  EXPECT_EQ(s.replicas, 40u);
  EXPECT_LT(std::abs(s.slope), 3 * s.se);
  const auto single = speed_estimate(runs[0].times(), runs[0].med_column(0), 20.0);
  EXPECT_GT(single.se, 0.0);
}

TEST(EmpiricalCf, Examples) {
  const std::vector<double> zeros(10, 0.0);
  const auto c0 = empirical_cf(zeros, 1.3);
  EXPECT_EQ(c0.value, std::complex<double>(1.0, 0.0));
  EXPECT_EQ(c0.se(), 0.0);
  const std::vector<double> pm{-1.0, 1.0};
  EXPECT_NEAR(std::abs(empirical_cf(pm, std::numbers::pi / 2).value), 0.0, 1e-15);
  EXPECT_THROW(empirical_cf(std::vector<double>{1.0}, 1.0), DomainError);
}

TEST(EmpiricalCf, PooledIsWeightedMean) {
  Rng rng = rng_stream(32, 0, lanes::aux);
  std::vector<double> a(300), b(700), all;
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = 2 * rng.normal() + 1;
  all = a;
  all.insert(all.end(), b.begin(), b.end());
  for (double l : {0.5, 1.0, 2.0}) {
    const auto ca = empirical_cf(a, l), cb = empirical_cf(b, l), c = empirical_cf(all, l);
    EXPECT_NEAR(std::abs(c.value - (0.3 * ca.value + 0.7 * cb.value)), 0.0, 1e-14);
    EXPECT_LE(std::abs(c.value), 1.0 + c.se());
  }
}

TEST(IncrementVsLevy, SamplerPasses) {
  levy::LevyParams lp;
  levy::LevySampler s(lp);
  Rng rng = rng_stream(33, 0, lanes::levy);
  std::vector<double> xs(20000);
  for (auto& v : xs) v = s.sample(0.5, rng);
  const std::vector<double> lambdas{-2, -1, -0.5, 0.5, 1, 2};
  EXPECT_TRUE(increment_vs_levy(xs, 0.5, lambdas, lp, false).pass);
  const auto fitted = increment_vs_levy(xs, 0.5, lambdas, lp, true);
  EXPECT_TRUE(fitted.pass);
  // Standard error of the weighted phase fit.
  double info = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    info += std::norm(fitted.empirical[i]) / (fitted.se[i] * fitted.se[i]) * lambdas[i] * lambdas[i];
  EXPECT_LT(std::abs(fitted.c_fit), 3.0 / (0.5 * std::sqrt(info)));
}

TEST(IncrementVsLevy, GaussianIsRejected) {
  levy::LevyParams lp;
  levy::LevySampler s(lp);
  Rng rng = rng_stream(34, 0, lanes::levy);
  std::vector<double> xs(100000);
  // Short increments keep the jump part visible next to the Gaussian bulk.
  for (auto& v : xs) v = s.sample(0.05, rng);
  const auto m = mean_se(xs);
  const double sd = m.se * std::sqrt(static_cast<double>(xs.size()));
  std::vector<double> g(xs.size());
  for (auto& v : g) v = m.mean + sd * rng.normal();
  const std::vector<double> lambdas{-2, 2};
  const auto r = increment_vs_levy(g, 0.05, lambdas, lp, true);
  EXPECT_FALSE(r.pass);
  for (std::size_t i = 0; i < lambdas.size(); ++i) EXPECT_GT(r.deviation[i], 3 * r.se[i]);
}

TEST(IncrementVsLevy, ZeroIncrements) {
  const std::vector<double> zeros(300, 0.0);
  const std::vector<double> lambdas{1.0};
  const auto r = increment_vs_levy(zeros, 0.7, lambdas, {}, false);
  EXPECT_NEAR(r.deviation[0], std::abs(1.0 - std::exp(0.7 * levy::kappa(1.0))), 1e-14);
  EXPECT_THROW(increment_vs_levy(std::vector<double>(100, 0.0), 0.7, lambdas, {}, false), DomainError);
}
