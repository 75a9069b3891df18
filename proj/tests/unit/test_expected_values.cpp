#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "bbmsel/kernels.hpp"
#include "bbmsel/stats.hpp"
#include "json.hpp"

using namespace bbmsel;

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json load_expected() {
  std::ifstream in(std::string(BBMSEL_TEST_DATA) + "/expected_values.json");
  if (!in) throw std::runtime_error("missing expected_values.json");
  return nlohmann::json::parse(in);
}

// I(u, [0, tau]) - pi tau sin(pi u) on the unit interval. The 1/n part of the
// hitting-flux series is summed in closed form (sum (-1)^{n+1} sin(n pi u)/n = pi u/2),
// leaving series that decay like n^-3 or exponentially.
double flux_remainder(double u, double tau) {
  double s = u - 2.0 / kPi * std::sin(kPi * u);
  for (int n = 2; n < 20000; ++n) {
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;
    const double sn = std::sin(n * kPi * u);
    const double m = static_cast<double>(n) * n - 1.0;
    s += 2.0 / kPi * sign * sn / (n * m);
    const double decay = std::exp(-kPi * kPi * m * tau / 2.0);
    if (decay > 1e-300) s -= 2.0 / kPi * sign * sn * n / m * decay;
  }
  return s;
}

// int_r^a bbm_density(x, y, t) dy from the sine series with each term integrated exactly.
double density_mass_above(double x, double r, double t, double a) {
  const kernels::IntervalParams iv(a);
  const double mu = iv.mu(), tau = t / (a * a);
  double s = 0.0;
  for (int n = 1; n < 400; ++n) {
    const double k = n * kPi / a;
    auto F = [&](double y) { return -std::exp(-mu * y) * (mu * std::sin(k * y) + k * std::cos(k * y)) / (mu * mu + k * k); };
    const double decay = std::exp(-kPi * kPi * (static_cast<double>(n) * n - 1.0) * tau / 2.0);
    s += decay * std::sin(k * x) * (F(a) - F(r));
  }
  return std::exp(mu * x) * 2.0 / a * s;
}

}  // namespace

TEST(ExpectedValues, FittedRConstantReproduces) {
  const double frozen = load_expected()["fitted_constants"]["C_R"].get<double>();
  EXPECT_NEAR(stats::calibrate_R_constant(), frozen, 1e-9 * frozen);

  double oracle = 0.0;
  for (double tau : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0})
    for (int i = 1; i < 50; ++i) oracle = std::max(oracle, std::abs(flux_remainder(i / 50.0, tau)));
  EXPECT_NEAR(oracle, frozen, 1e-6);
}

TEST(ExpectedValues, FittedNConstantReproduces) {
  const double frozen = load_expected()["fitted_constants"]["C_N"].get<double>();
  EXPECT_NEAR(stats::calibrate_N_constant(), frozen, 1e-9 * frozen);

  double oracle = 0.0;
  for (double a : {6.0, 8.0, 10.0, 12.0, 15.0, 20.0}) {
    const kernels::IntervalParams iv(a);
    const double mu = iv.mu();
    for (double rf : {0.0, 0.125, 0.25, 0.5}) {
      const double r = rf * a, q = (1.0 + r) / a;
      const double factor = 2.0 * kPi * (1.0 + mu * r) * std::exp(mu * (a - r)) / (a * a * a);
      for (double tau : {1.0, 2.0, 4.0}) {
        const double E = kernels::error_envelope_E(tau);
        for (int i = 1; i < 20; ++i) {
          const double x = a * i / 20.0;
          const double wz = a * std::exp(mu * (x - a)) * std::sin(kPi * x / a);
          const double err = density_mass_above(x, r, tau * a * a, a) / (factor * wz) - 1.0;
          oracle = std::max(oracle, std::max(0.0, std::abs(err) - E) / ((1.0 + E) * q * q));
        }
      }
    }
  }
  EXPECT_NEAR(oracle, frozen, 1e-7 * frozen);
}
