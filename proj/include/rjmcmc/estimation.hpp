#pragma once

#include <span>
#include <vector>

#include "rjmcmc/sampler.hpp"

namespace rjmcmc::estimation {

// Posterior model probabilities from visit proportions, pooled over
// replicates, with batch-means standard errors.
struct ModelProbabilityEstimate {
  std::vector<int> model_index;
  std::vector<double> probability;
  std::vector<double> std_error;
  std::vector<long> visit_count;
};
ModelProbabilityEstimate posterior_model_probs(const Trace& trace,
                                               long burn_in_iteration,
                                               int n_models, int batches = 50);

struct BayesFactorEstimate {
  double value = 0.0;
  // Standard error of log(value); delta method on batch means.
  double log_std_error = 0.0;
  long count_numerator = 0;  // visits to k', or attempts k -> k'
  long count_denominator = 0;
};

// Visit-frequency estimator: [p(k'|x)/p(k|x)] [p(k)/p(k')].
BayesFactorEstimate bayes_factor_visits(const Trace& trace,
                                        long burn_in_iteration, int k_to,
                                        int k_from,
                                        std::span<const double> model_prior,
                                        int batches = 50);

// Acceptance-probability bridge estimator: the ratio of mean recorded
// acceptance probabilities of direct k -> k' attempts over direct
// k' -> k attempts. Burn-in attempts are excluded unless asked for.
BayesFactorEstimate bayes_factor_bridge(const Trace& trace, int k_to,
                                        int k_from,
                                        bool include_burnin = false,
                                        int batches = 50);

}  // namespace rjmcmc::estimation
