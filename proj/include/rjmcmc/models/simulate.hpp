#pragma once

#include <vector>

#include "rjmcmc/models/mixture.hpp"
#include "rjmcmc/rng.hpp"

namespace rjmcmc::models {

// Forward simulators for desk-scale synthetic datasets; deterministic
// given the generator state.

std::vector<double> simulate_mixture(
    std::span<const MixtureComponent> components, std::size_t n, Rng& rng);

// AR(p) series with standard warm-up discarded.
std::vector<double> simulate_ar(std::span<const double> coefficients,
                                double noise_sd, std::size_t length, Rng& rng);

// Event times of an inhomogeneous Poisson process with piecewise-constant
// rate; positions.size() + 1 == heights.size().
std::vector<double> simulate_changepoint(std::span<const double> positions,
                                         std::span<const double> heights,
                                         double horizon, Rng& rng);

}  // namespace rjmcmc::models
