#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/problems.hpp"

namespace rjmcmc::models {

struct ArHyperParams {
  double coef_sd = 1.0;      // N(0, coef_sd^2) prior on AR coefficients
  double noise_shape = 2.0;  // IG prior on the noise variance
  double noise_scale = 1.0;
  int k_max = 10;

  // noise_scale defaults to the sample variance of the series.
  static ArHyperParams defaults_for(std::span<const double> series);
};

// Autoregression of order k with Gaussian noise, conditional likelihood:
// residuals x_t - sum_tau a_tau x_{t-tau} over t = condition_on+1 .. T.
// params layout: [a_1 .. a_k, noise_variance]; dimension k+1; label k.
//
// condition_on = k gives the per-model form; order-selection samplers
// condition every model on the same first k_max values so likelihoods
// are comparable across orders (and a zero appended coefficient changes
// nothing, which the centering calibration relies on).
class ArModel : public ModelDefinition {
public:
  ArModel(int k, std::shared_ptr<const std::vector<double>> series,
          ArHyperParams hyper, int condition_on = -1);

  int dimension() const override { return k_ + 1; }
  int label() const override { return k_; }
  std::string name() const override { return "ar-" + std::to_string(k_); }
  double log_prior(std::span<const double> params) const override;
  double log_likelihood(std::span<const double> params) const override;
  std::vector<double> sample_prior(Rng& rng) const override;

  // Joint random walk on the coefficients, then an exact conjugate draw
  // of the noise variance. `scales` entries 0..k-1 drive the walk.
  ChainState within_model_update(const ChainState& state,
                                 std::span<const double> scales,
                                 Rng& rng) const override;

  const ArHyperParams& hyper() const { return hyper_; }
  int condition_on() const { return condition_on_; }

private:
  int k_ = 1;
  std::shared_ptr<const std::vector<double>> series_;
  ArHyperParams hyper_;
  int condition_on_ = 1;
};

// Space over orders 1..k_max (uniform prior, nearest-neighbour jumps,
// shared conditioning window) with birth moves scaled by the zeroth-order
// rule sigma = coef_sd * q(k->k+1)/q(k+1->k).
Problem make_ar_problem(std::shared_ptr<const std::vector<double>> series,
                        const ArHyperParams& hyper);

}  // namespace rjmcmc::models
