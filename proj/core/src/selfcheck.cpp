#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "bbmsel/kernels.hpp"
#include "quadrature.hpp"

namespace bbmsel::kernels {
namespace {

SelfCheckItem dual_representation(const KernelAccuracy& acc) {
  SelfCheckItem item{"theta_dual_representation", 0.0, 1e-12, false};
  for (int it = 1; it <= 100; ++it) {
    const double t = 0.05 * it;
    for (int ix = -40; ix <= 40; ++ix) {
      const double x = 0.05 * ix;
      const double d = std::abs(theta(x, t, acc, ThetaForm::Spectral) - theta(x, t, acc, ThetaForm::Gaussian));
      item.worst = std::max(item.worst, d);
    }
  }
  item.pass = item.worst <= item.tolerance;
  return item;
}

SelfCheckItem heat_equation(const KernelAccuracy& acc) {
  SelfCheckItem item{"theta_heat_equation_residual", 0.0, 1e-6, false};
  const double h = 1e-5;
  for (int it = 1; it <= 100; ++it) {
    const double t = 0.05 * it;
    for (int ix = -40; ix <= 40; ++ix) {
      const double x = 0.05 * ix;
      const double dt = (theta(x, t + h, acc) - theta(x, t - h, acc)) / (2 * h);
      item.worst = std::max(item.worst, std::abs(dt - 0.5 * theta_second(x, t, acc)));
    }
  }
  item.pass = item.worst <= item.tolerance;
  return item;
}

SelfCheckItem green_identity(const KernelAccuracy& acc) {
  SelfCheckItem item{"green_identity", 0.0, 1e-6, false};
  for (double a : {1.0 * std::numbers::pi, 5.0, 10.0}) {
    const IntervalParams iv(a);
    const double T = 4.0 * a * a;
    for (int i = 1; i <= 9; ++i) {
      for (int j = 1; j <= 9; ++j) {
        const double x = a * i / 10.0;
        const double y = a * j / 10.0;
        double total = 0.0;
        double lo = 0.0;
        for (double hi : {a * a / 64, a * a / 16, a * a / 4, a * a, T}) {
          auto f = [&](double s) { return s <= 0 ? 0.0 : p_killed(x, y, s, iv, acc); };
          total += lo == 0.0 ? detail::integrate_from_zero(f, hi, 1e-10, "green_identity")
                             : detail::integrate(f, lo, hi, 1e-10, "green_identity");
          lo = hi;
        }
        // Exact remainder of the spectral series beyond T.
        for (int n = 1; n < 50; ++n) {
          const double k = std::numbers::pi * n / a;
          total += 2.0 / a * std::exp(-k * k * T / 2.0) * 2.0 / (k * k) * std::sin(k * x) * std::sin(k * y);
        }
        item.worst = std::max(item.worst, std::abs(total - green_killed(x, y, iv)));
      }
    }
  }
  item.pass = item.worst <= item.tolerance;
  return item;
}

SelfCheckItem chapman_kolmogorov(const KernelAccuracy& acc) {
  SelfCheckItem item{"chapman_kolmogorov", 0.0, 1e-8, false};
  const IntervalParams iv(std::numbers::pi);
  const double a = iv.a();
  for (double s : {0.1, 0.4, 2.0}) {
    for (double x : {0.2, 0.5}) {
      for (double y : {0.3, 0.8}) {
        const double xs = x * a, ys = y * a;
        const double lhs = detail::integrate(
            [&](double z) { return p_killed(xs, z, s, iv, acc) * p_killed(z, ys, s, iv, acc); }, 0.0, a, 1e-12,
            "chapman_kolmogorov");
        item.worst = std::max(item.worst, std::abs(lhs - p_killed(xs, ys, 2 * s, iv, acc)));
      }
    }
  }
  item.pass = item.worst <= item.tolerance;
  return item;
}

SelfCheckItem thbar_limits(const KernelAccuracy& acc) {
  SelfCheckItem item{"thbar_monotone_limit", 0.0, 1e-12, false};
  double prev = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = 0.01 * i;
    const double v = thbar(t, acc);
    item.worst = std::max(item.worst, std::max(0.0, prev - v));
    prev = v;
  }
  item.worst = std::max(item.worst, std::abs(thbar(50.0, acc) - 1.0));
  item.worst = std::max(item.worst, std::abs(thbar(0.0, acc)));
  item.pass = item.worst <= item.tolerance;
  return item;
}

}  // namespace

bool SelfCheckReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const SelfCheckItem& i) { return i.pass; });
}

SelfCheckReport run_selfcheck(const KernelAccuracy& acc) {
  acc.validate();
  const auto start = std::chrono::steady_clock::now();
  SelfCheckReport rep;
  rep.items.push_back(dual_representation(acc));
  rep.items.push_back(heat_equation(acc));
  rep.items.push_back(green_identity(acc));
  rep.items.push_back(chapman_kolmogorov(acc));
  rep.items.push_back(thbar_limits(acc));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace bbmsel::kernels
