#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rjmcmc {

// Counter-based generator: the SplitMix64 output permutation applied to a
// linearly advancing counter. Replicate chains use sub-streams keyed by
// (seed, stream), so parallel chains are reproducible and do not share
// state. All variate generation is built on top of this one source so a
// run is fully determined by its seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Strictly inside (0,1); 52-bit resolution.
  double uniform();
  double uniform(double a, double b);

  double normal();
  double normal(double mean, double sd);
  double exponential(double rate);

  // Shape/rate parameterisation (mean = shape/rate). Marsaglia-Tsang.
  double gamma(double shape, double rate);
  // Inverse gamma with shape a, scale b (mean b/(a-1) for a > 1).
  double inverse_gamma(double shape, double scale);
  double beta(double a, double b);

  // Uniform draw from {0, 1, ..., n-1}.
  std::uint64_t uniform_int(std::uint64_t n);
  // Index draw proportional to the (unnormalised, nonnegative) weights.
  int categorical(std::span<const double> weights);
  // Index draw proportional to exp(log_weights), computed stably.
  int categorical_log(std::span<const double> log_weights);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace rjmcmc
