#pragma once

#include <cstddef>

#include "bbmsel/kernels.hpp"
#include "bbmsel/population.hpp"

namespace bbmsel {

/// floor(2 pi e^{A} a^{-3} e^{mu a}).
std::size_t hperp_count(double A, const kernels::IntervalParams& iv);

/// hperp_count(A) iid particles from the metastable profile, labelled 1..n.
Population sample_initial_Hperp(double A, const kernels::IntervalParams& iv, Rng& rng,
                                std::size_t cap = 10'000'000);

/// n iid particles from `density`, labelled 1..n.
Population sample_population(std::size_t n, const kernels::SinExpDensity& density, Rng& rng);

}  // namespace bbmsel
