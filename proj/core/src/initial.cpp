#include "bbmsel/initial.hpp"

#include <cmath>
#include <numbers>

#include "bbmsel/errors.hpp"
#include "bbmsel/rng.hpp"

namespace bbmsel {

std::size_t hperp_count(double A, const kernels::IntervalParams& iv) {
  const double a = iv.a();
  const double n = std::floor(2.0 * std::numbers::pi * std::exp(A) * std::exp(iv.mu() * a) / (a * a * a));
  if (!std::isfinite(n) || n > 1e15) throw ResourceError("initial population count overflows");
  return static_cast<std::size_t>(std::max(0.0, n));
}

Population sample_population(std::size_t n, const kernels::SinExpDensity& density, Rng& rng) {
  Population pop;
  pop.particles.reserve(n);
  const Label root;
  for (std::size_t i = 0; i < n; ++i) {
    Particle p;
    p.label = root.child(static_cast<std::uint32_t>(i + 1));
    p.x = density.sample(rng);
    pop.particles.push_back(std::move(p));
  }
  return pop;
}

Population sample_initial_Hperp(double A, const kernels::IntervalParams& iv, Rng& rng, std::size_t cap) {
  const std::size_t n = hperp_count(A, iv);
  if (n == 0) throw DomainError("initial population is empty for these (A, a)");
  if (n > cap) throw ResourceError("initial population of " + std::to_string(n) + " exceeds the cap");
  return sample_population(n, kernels::meta_density(iv), rng);
}

}  // namespace bbmsel
