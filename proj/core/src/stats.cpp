#include "bbmsel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbmsel/errors.hpp"
#include "quadrature.hpp"

namespace bbmsel::stats {
namespace {
constexpr double kPi = std::numbers::pi;
}

MeanSE mean_se(std::span<const double> xs) {
  MeanSE r;
  r.n = xs.size();
  if (r.n == 0) throw DomainError("mean_se: empty sample");
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(r.n);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  r.mean = m;
  r.se = r.n > 1 ? std::sqrt(ss / static_cast<double>(r.n - 1) / static_cast<double>(r.n)) : 0.0;
  return r;
}

Histogram empirical_density(std::span<const double> xs, std::size_t bins, double lo, double hi) {
  if (bins < 10) throw DomainError("empirical_density: bins must be >= 10");
  if (xs.empty()) throw DomainError("empirical_density: empty population");
  if (!(hi > lo)) throw DomainError("empirical_density: empty range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.density.assign(bins, 0.0);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (double x : xs) {
    if (!(x >= lo && x < hi)) {
      ++h.outside;
      continue;
    }
    const auto i = std::min(bins - 1, static_cast<std::size_t>((x - lo) / w));
    h.density[i] += 1.0;
    ++h.inside;
  }
  if (h.inside > 0)
    for (double& d : h.density) d /= static_cast<double>(h.inside) * w;
  return h;
}

double l1_distance(const Histogram& h, const std::function<double(double)>& f) {
  double total = 0.0;
  const double w = h.width();
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    const double lo = h.lo + static_cast<double>(i) * w;
    const double d = h.density[i];
    total += detail::integrate([&](double x) { return std::abs(d - f(x)); }, lo, lo + w, 1e-9, "l1_distance", 1e-12);
  }
  return total;
}

double l1_vs_meta(const Histogram& h, const kernels::IntervalParams& iv) {
  const auto m = kernels::meta_density(iv);
  return l1_distance(h, [&](double x) { return m(x); });
}

double sup_distance(const Histogram& h, const std::function<double(double)>& f) {
  double worst = 0.0;
  const double w = h.width();
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    const double lo = h.lo + static_cast<double>(i) * w;
    const double avg = detail::integrate(f, lo, lo + w, 1e-10, "sup_distance", 1e-14) / w;
    worst = std::max(worst, std::abs(h.density[i] - avg));
  }
  return worst;
}

OracleReport verdict(std::string name, double estimate, double se, double analytic, double slack) {
  OracleReport r{std::move(name), estimate, se, analytic, slack, false};
  r.pass = std::abs(estimate - analytic) <= slack + 3.0 * se;
  return r;
}

namespace {

constexpr std::size_t kMinReplicas = 30;

void same_size(std::size_t a, std::size_t b, const char* who) {
  if (a != b) throw DomainError(std::string(who) + ": inputs must have equal length");
  if (a < kMinReplicas) throw DomainError(std::string(who) + ": at least 30 replicas are required");
}

}  // namespace

OracleReport oracle_Z(std::span<const double> Z0, std::span<const double> Zt) {
  same_size(Z0.size(), Zt.size(), "oracle_Z");
  std::vector<double> ratio(Z0.size());
  for (std::size_t i = 0; i < Z0.size(); ++i) ratio[i] = Zt[i] / Z0[i];
  const auto ms = mean_se(ratio);
  return verdict("Z_martingale", ms.mean, ms.se, 1.0, 0.0);
}

OracleReport oracle_R(std::span<const double> Z0, std::span<const double> Y0, std::span<const double> R, double t,
                      double a, double C) {
  same_size(Z0.size(), R.size(), "oracle_R");
  same_size(Y0.size(), R.size(), "oracle_R");
  const std::size_t n = R.size();
  std::vector<double> diff(n);
  double analytic = 0.0, slack = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double an = kPi * t * Z0[i] / (a * a * a);
    diff[i] = R[i] - an;
    analytic += an;
    slack += C * Y0[i];
  }
  analytic /= static_cast<double>(n);
  slack /= static_cast<double>(n);
  const auto md = mean_se(diff);
  return verdict("R_boundary_flux", md.mean + analytic, md.se, analytic, slack);
}

double N_asymptotic_factor(double r, const kernels::IntervalParams& iv) {
  const double a = iv.a(), mu = iv.mu();
  return 2.0 * kPi * (1.0 + mu * r) * std::exp(mu * (a - r)) / (a * a * a);
}

double N_leading_factor(double r, const kernels::IntervalParams& iv) {
  const double a = iv.a(), mu = iv.mu();
  if (!(r >= 0 && r <= a)) throw DomainError("N_leading_factor: r must lie in [0, a]");
  const double k = kPi / a;
  // int e^{-mu y} sin(k y) dy = -e^{-mu y}(mu sin ky + k cos ky)/(mu^2 + k^2)
  auto F = [&](double y) { return -std::exp(-mu * y) * (mu * std::sin(k * y) + k * std::cos(k * y)) / (mu * mu + k * k); };
  return 2.0 * std::exp(mu * a) / (a * a) * (F(a) - F(r));
}

OracleReport oracle_N(std::span<const double> Z0, std::span<const double> counts, double t, double r, double a,
                      double C) {
  same_size(Z0.size(), counts.size(), "oracle_N");
  const kernels::IntervalParams iv(a);
  const double E = kernels::error_envelope_E(t / (a * a));
  const double q = (1.0 + r) / a;
  const double factor = N_asymptotic_factor(r, iv);
  const double rel = E + C * (1.0 + E) * q * q;
  const std::size_t n = counts.size();
  std::vector<double> diff(n);
  double analytic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double an = factor * Z0[i];
    diff[i] = counts[i] - an;
    analytic += an;
  }
  analytic /= static_cast<double>(n);
  const auto md = mean_se(diff);
  return verdict("N_count_above_r", md.mean + analytic, md.se, analytic, rel * analytic);
}

double calibrate_R_constant() {
  const kernels::IntervalParams unit_like(kPi);
  double worst = 0.0;
  // Work in unit-interval coordinates: I^a(x, S) = I(x/a, S/a^2), here with a = pi scaled back.
  const double a = unit_like.a();
  for (double tau : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int i = 1; i < 50; ++i) {
      const double u = i / 50.0;
      const double I = kernels::I_integral(u * a, {0.0, tau * a * a}, unit_like);
      worst = std::max(worst, std::abs(I - kPi * tau * std::sin(kPi * u)));
    }
  }
  return worst;
}

double calibrate_N_constant() {
  double worst = 0.0;
  for (double a : {6.0, 8.0, 10.0, 12.0, 15.0, 20.0}) {
    const kernels::IntervalParams iv(a);
    for (double rf : {0.0, 0.125, 0.25, 0.5}) {
      const double r = rf * a;
      const double q = (1.0 + r) / a;
      for (double tau : {1.0, 2.0, 4.0}) {
        const double t = tau * a * a;
        const double E = kernels::error_envelope_E(tau);
        for (int i = 1; i < 20; ++i) {
          const double x = a * i / 20.0;
          const double exact = detail::integrate(
              [&](double yy) { return kernels::bbm_density(x, yy, t, iv); }, r, a, 1e-12, "calibrate_N");
          const double err = exact / (N_asymptotic_factor(r, iv) * kernels::w_Z(x, iv)) - 1.0;
          worst = std::max(worst, std::max(0.0, std::abs(err) - E) / ((1.0 + E) * q * q));
        }
      }
    }
  }
  return worst;
}

namespace {

double ols_slope(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (t[i] - mt) * (y[i] - my);
    sxx += (t[i] - mt) * (t[i] - mt);
  }
  if (!(sxx > 0)) throw DomainError("speed_estimate: degenerate time grid");
  return sxy / sxx;
}

std::pair<std::vector<double>, std::vector<double>> after_burn_in(std::span<const double> t, std::span<const double> y,
                                                                  double burn_in) {
  if (t.size() != y.size()) throw DomainError("speed_estimate: length mismatch");
  if (t.empty() || t.back() <= 2.0 * burn_in) throw DomainError("speed_estimate: horizon must exceed twice the burn-in");
  std::vector<double> tt, yy;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= burn_in && std::isfinite(y[i])) {
      tt.push_back(t[i]);
      yy.push_back(y[i]);
    }
  if (tt.size() < 3) throw DomainError("speed_estimate: too few points after burn-in");
  return {tt, yy};
}

}  // namespace

SpeedEstimate speed_estimate(std::span<const double> t, std::span<const double> y, double burn_in) {
  const auto [tt, yy] = after_burn_in(t, y, burn_in);
  SpeedEstimate s;
  s.replicas = 1;
  s.slope = ols_slope(tt, yy);
  constexpr std::size_t kBatches = 10;
  if (tt.size() < 2 * kBatches) return s;
  std::vector<double> rates;
  const std::size_t per = (tt.size() - 1) / kBatches;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const std::size_t i0 = b * per, i1 = (b + 1) * per;
    rates.push_back((yy[i1] - yy[i0]) / (tt[i1] - tt[i0]));
  }
  s.se = mean_se(rates).se;
  return s;
}

SpeedEstimate speed_estimate(const std::vector<StatsSeries>& runs, std::size_t alpha_index, double burn_in) {
  if (runs.empty()) throw DomainError("speed_estimate: no runs");
  if (runs.size() == 1) {
    const auto t = runs[0].times();
    const auto y = runs[0].med_column(alpha_index);
    return speed_estimate(t, y, burn_in);
  }
  std::vector<double> slopes;
  for (const auto& r : runs) {
    const auto t = r.times();
    const auto y = r.med_column(alpha_index);
    const auto [tt, yy] = after_burn_in(t, y, burn_in);
    slopes.push_back(ols_slope(tt, yy));
  }
  const auto ms = mean_se(slopes);
  return {ms.mean, ms.se, runs.size()};
}

CfPoint empirical_cf(std::span<const double> samples, double lambda) {
  if (samples.size() < 2) throw DomainError("empirical_cf: at least two samples are required");
  std::vector<double> c(samples.size()), s(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    c[i] = std::cos(lambda * samples[i]);
    s[i] = std::sin(lambda * samples[i]);
  }
  const auto mc = mean_se(c);
  const auto ms = mean_se(s);
  return {lambda, {mc.mean, ms.mean}, mc.se, ms.se};
}

LevyComparison increment_vs_levy(std::span<const double> increments, double dt, std::span<const double> lambdas,
                                 const levy::LevyParams& lp, bool fit_c) {
  if (!(dt > 0)) throw DomainError("increment_vs_levy: dt must be > 0");
  if (lambdas.empty()) throw DomainError("increment_vs_levy: no lambdas");
  if (increments.size() < 200) throw DomainError("increment_vs_levy: at least 200 increments are required");
  LevyComparison out;
  out.dt = dt;
  out.lambdas.assign(lambdas.begin(), lambdas.end());
  levy::LevyParams base = lp;
  base.c = 0.0;
  std::vector<std::complex<double>> k0;
  for (double l : lambdas) {
    const auto cf = empirical_cf(increments, l);
    out.empirical.push_back(cf.value);
    out.se.push_back(cf.se());
    k0.push_back(levy::kappa(l, base));
  }
  out.c_fit = lp.c;
  if (fit_c) {
    // Phase residual arg(phi) - dt Im kappa_0 = dt lambda c (mod 2 pi), fitted by least squares
    // with weights |phi|^2/se^2, the inverse variance of the empirical phase.
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double l = lambdas[i];
      const double model_phase = dt * k0[i].imag();
      double res = std::arg(out.empirical[i]) - model_phase;
      res = std::remainder(res, 2.0 * kPi);
      const double w = std::norm(out.empirical[i]) / std::max(out.se[i] * out.se[i], 1e-300);
      num += w * l * res;
      den += w * l * l;
    }
    out.c_fit = den > 0 ? num / (dt * den) : 0.0;
  }
  out.pass = true;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const std::complex<double> kap = k0[i] + std::complex<double>(0.0, lambdas[i] * out.c_fit);
    out.model.push_back(std::exp(dt * kap));
    out.deviation.push_back(std::abs(out.empirical[i] - out.model[i]));
    if (out.deviation[i] > 3.0 * out.se[i]) out.pass = false;
  }
  return out;
}

}  // namespace bbmsel::stats
