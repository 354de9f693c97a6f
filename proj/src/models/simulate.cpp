#include "rjmcmc/models/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rjmcmc::models {

std::vector<double> simulate_mixture(
    std::span<const MixtureComponent> components, std::size_t n, Rng& rng) {
  std::vector<double> weights(components.size());
  for (std::size_t j = 0; j < components.size(); ++j)
    weights[j] = components[j].weight;
  std::vector<double> data(n);
  for (double& x : data) {
    const auto j = static_cast<std::size_t>(rng.categorical(weights));
    x = rng.normal(components[j].mean, std::sqrt(components[j].variance));
  }
  return data;
}

std::vector<double> simulate_ar(std::span<const double> coefficients,
                                double noise_sd, std::size_t length,
                                Rng& rng) {
  const std::size_t warmup = 200 + 10 * coefficients.size();
  std::vector<double> series(length + warmup, 0.0);
  for (std::size_t t = 0; t < series.size(); ++t) {
    double value = noise_sd * rng.normal();
    for (std::size_t tau = 0; tau < coefficients.size() && tau < t; ++tau)
      value += coefficients[tau] * series[t - tau - 1];
    series[t] = value;
  }
  return {series.begin() + static_cast<std::ptrdiff_t>(warmup), series.end()};
}

std::vector<double> simulate_changepoint(std::span<const double> positions,
                                         std::span<const double> heights,
                                         double horizon, Rng& rng) {
  if (heights.size() != positions.size() + 1)
    throw std::invalid_argument(
        "simulate_changepoint: need one height per segment");
  std::vector<double> events;
  double start = 0.0;
  for (std::size_t seg = 0; seg < heights.size(); ++seg) {
    const double end = seg < positions.size() ? positions[seg] : horizon;
    if (!(end >= start))
      throw std::invalid_argument(
          "simulate_changepoint: positions must be sorted inside the horizon");
    double t = start;
    for (;;) {
      t += rng.exponential(heights[seg]);
      if (t >= end) break;
      events.push_back(t);
    }
    start = end;
  }
  return events;
}

}  // namespace rjmcmc::models
