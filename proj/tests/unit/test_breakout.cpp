#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bbmsel/breakout.hpp"
#include "bbmsel/errors.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/stats.hpp"

using namespace bbmsel;

namespace {

BreakoutParams params(double y, double dt) {
  BreakoutParams bp;
  bp.A = 5;
  bp.epsilon = 0.2;
  bp.y = y;
  bp.zeta = 50;
  bp.dt = dt;
  return bp;
}

}  // namespace

// A single stopped particle means no branching before the drift -1 path from y reaches 0:
// E[exp(-H/2)] = exp(-(sqrt 2 - 1) y).
TEST(Breakout, SingleStopProbability) {
  const kernels::IntervalParams iv(20.0);
  const auto law = ReproductionLaw::binary();
  for (double y : {1.0, 3.0}) {
    const auto bp = params(y, 0.02);
    std::vector<double> single;
    for (int i = 0; i < 4000; ++i) {
      Rng rng = rng_stream(21, i, lanes::trials);
      single.push_back(breakout_trial(bp, iv, law, rng, false).stopped_count == 1 ? 1.0 : 0.0);
    }
    const auto m = stats::mean_se(single);
    EXPECT_NEAR(m.mean, std::exp(-(std::numbers::sqrt2 - 1) * y), 3 * m.se) << y;
  }
}

TEST(Breakout, OutcomeInvariants) {
  const kernels::IntervalParams iv(20.0);
  const auto law = ReproductionLaw::binary();
  const auto bp = params(3.0, 0.05);
  for (int i = 0; i < 300; ++i) {
    Rng rng = rng_stream(22, i, lanes::trials);
    const auto out = breakout_trial(bp, iv, law, rng);
    double Z = 0, Y = 0;
    for (const auto& f : out.stopped_line) {
      const double line = iv.a() - bp.y + (1 - iv.mu()) * f.sigma;
      EXPECT_NEAR(f.position, line, 1e-12);
      EXPECT_LE(f.sigma, out.sigma_max);
      Z += kernels::w_Z(f.position, iv);
      Y += kernels::w_Y(f.position, iv);
    }
    EXPECT_EQ(out.stopped_line.size(), out.stopped_count);
    EXPECT_NEAR(out.Z, Z, 1e-9 * std::max(1.0, Z));
    EXPECT_NEAR(out.Y, Y, 1e-9 * std::max(1.0, Y));
    EXPECT_NEAR(out.W_y, bp.y * std::exp(-bp.y) * static_cast<double>(out.stopped_count), 1e-12);
    EXPECT_EQ(out.is_breakout, out.Z > bp.epsilon * std::exp(bp.A) || out.sigma_exceeded);
    EXPECT_GE(out.stopped_count, 1u);
  }
}

TEST(Breakout, CapCountsAsExceeded) {
  const kernels::IntervalParams iv(20.0);
  auto bp = params(3.0, 0.05);
  bp.y = 15.0;
  bp.work_cap = 200;
  bool any = false;
  for (int i = 0; i < 50 && !any; ++i) {
    Rng rng = rng_stream(23, i, lanes::trials);
    const auto out = breakout_trial(bp, iv, ReproductionLaw::binary(), rng);
    if (out.capped) {
      any = true;
      EXPECT_TRUE(out.sigma_exceeded);
      EXPECT_TRUE(out.is_breakout);
    }
  }
  EXPECT_TRUE(any);
}

TEST(Breakout, Deterministic) {
  const kernels::IntervalParams iv(20.0);
  const auto bp = params(3.0, 0.05);
  Rng a = rng_stream(24, 9, lanes::trials), b = rng_stream(24, 9, lanes::trials);
  const auto x = breakout_trial(bp, iv, ReproductionLaw::binary(), a);
  const auto y = breakout_trial(bp, iv, ReproductionLaw::binary(), b);
  EXPECT_EQ(x.stopped_count, y.stopped_count);
  EXPECT_EQ(x.Z, y.Z);
}

TEST(Breakout, RejectsBadParameters) {
  const kernels::IntervalParams iv(20.0);
  Rng rng = rng_stream(1, 0, 0);
  EXPECT_THROW(breakout_trial(params(25.0, 0.05), iv, ReproductionLaw::binary(), rng), DomainError);
  EXPECT_THROW(breakout_trial(params(3.0, 0.0), iv, ReproductionLaw::binary(), rng), DomainError);
}
