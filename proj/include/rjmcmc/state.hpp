#pragma once

#include <vector>

namespace rjmcmc {

// One point of the trans-dimensional chain: model index plus that model's
// parameter vector, with the log densities cached at construction.
struct ChainState {
  int model_index = 0;
  std::vector<double> params;
  double log_likelihood = 0.0;
  double log_prior = 0.0;

  // Within-model posterior kernel, excluding the model prior p(k).
  double log_target() const { return log_likelihood + log_prior; }
  double deviance() const { return -2.0 * log_likelihood; }
};

}  // namespace rjmcmc
