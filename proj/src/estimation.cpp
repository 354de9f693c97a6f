#include "rjmcmc/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::estimation {

namespace {

// Batch means of an indicator (or value) sequence split into `batches`
// contiguous blocks; falls back to fewer blocks on short sequences.
std::vector<double> batch_means(std::span<const double> values, int batches) {
  const std::size_t n = values.size();
  const int b = std::max(2, std::min<int>(batches, static_cast<int>(n / 2)));
  const std::size_t len = n / static_cast<std::size_t>(b);
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < len; ++j)
      acc += values[static_cast<std::size_t>(i) * len + j];
    means.push_back(acc / static_cast<double>(len));
  }
  return means;
}

std::vector<int> pooled_indicator_sequence(const Trace& trace,
                                           long burn_in_iteration) {
  std::vector<int> seq;
  for (const auto& replicate : trace.replicates)
    for (const auto& s : replicate.states)
      if (s.iteration > burn_in_iteration) seq.push_back(s.model_index);
  return seq;
}

}  // namespace

ModelProbabilityEstimate posterior_model_probs(const Trace& trace,
                                               long burn_in_iteration,
                                               int n_models, int batches) {
  const auto seq = pooled_indicator_sequence(trace, burn_in_iteration);
  if (seq.empty())
    throw std::invalid_argument(
        "posterior_model_probs: no draws past the burn-in");

  ModelProbabilityEstimate estimate;
  for (int m = 0; m < n_models; ++m) {
    std::vector<double> indicator(seq.size());
    long visits = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      indicator[i] = seq[i] == m ? 1.0 : 0.0;
      visits += seq[i] == m ? 1 : 0;
    }
    const auto bm = batch_means(indicator, batches);
    estimate.model_index.push_back(m);
    estimate.probability.push_back(static_cast<double>(visits) /
                                   static_cast<double>(seq.size()));
    estimate.std_error.push_back(
        std::sqrt(stats::variance_sample(bm) /
                  static_cast<double>(bm.size())));
    estimate.visit_count.push_back(visits);
  }
  return estimate;
}

BayesFactorEstimate bayes_factor_visits(const Trace& trace,
                                        long burn_in_iteration, int k_to,
                                        int k_from,
                                        std::span<const double> model_prior,
                                        int batches) {
  const auto seq = pooled_indicator_sequence(trace, burn_in_iteration);
  if (seq.empty())
    throw std::invalid_argument("bayes_factor_visits: empty trace");

  long visits_to = 0;
  long visits_from = 0;
  std::vector<double> ind_to(seq.size());
  std::vector<double> ind_from(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ind_to[i] = seq[i] == k_to ? 1.0 : 0.0;
    ind_from[i] = seq[i] == k_from ? 1.0 : 0.0;
    visits_to += seq[i] == k_to ? 1 : 0;
    visits_from += seq[i] == k_from ? 1 : 0;
  }
  if (visits_to == 0 || visits_from == 0)
    throw std::invalid_argument(
        "bayes_factor_visits: a model was never visited; use the "
        "acceptance-probability bridge estimator instead");

  const double p_to = static_cast<double>(visits_to) /
                      static_cast<double>(seq.size());
  const double p_from = static_cast<double>(visits_from) /
                        static_cast<double>(seq.size());

  BayesFactorEstimate estimate;
  estimate.value = (p_to / p_from) *
                   (model_prior[static_cast<std::size_t>(k_from)] /
                    model_prior[static_cast<std::size_t>(k_to)]);
  estimate.count_numerator = visits_to;
  estimate.count_denominator = visits_from;

  // Delta method on log B with the full batch-mean covariance.
  const auto bm_to = batch_means(ind_to, batches);
  const auto bm_from = batch_means(ind_from, batches);
  const std::size_t b = std::min(bm_to.size(), bm_from.size());
  double mean_to = 0.0, mean_from = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    mean_to += bm_to[i];
    mean_from += bm_from[i];
  }
  mean_to /= static_cast<double>(b);
  mean_from /= static_cast<double>(b);
  double var_to = 0.0, var_from = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    var_to += (bm_to[i] - mean_to) * (bm_to[i] - mean_to);
    var_from += (bm_from[i] - mean_from) * (bm_from[i] - mean_from);
    cov += (bm_to[i] - mean_to) * (bm_from[i] - mean_from);
  }
  const double denom = static_cast<double>(b) * static_cast<double>(b - 1);
  var_to /= denom;
  var_from /= denom;
  cov /= denom;
  estimate.log_std_error =
      std::sqrt(std::max(0.0, var_to / (p_to * p_to) +
                                  var_from / (p_from * p_from) -
                                  2.0 * cov / (p_to * p_from)));
  return estimate;
}

BayesFactorEstimate bayes_factor_bridge(const Trace& trace, int k_to,
                                        int k_from, bool include_burnin,
                                        int batches) {
  std::vector<double> alpha_fwd;
  std::vector<double> alpha_rev;
  for (const auto& replicate : trace.replicates) {
    for (const auto& record : replicate.acceptances) {
      if (record.burnin && !include_burnin) continue;
      if (record.from_index == k_from && record.to_index == k_to)
        alpha_fwd.push_back(record.alpha);
      else if (record.from_index == k_to && record.to_index == k_from)
        alpha_rev.push_back(record.alpha);
    }
  }
  if (alpha_fwd.empty() || alpha_rev.empty())
    throw std::invalid_argument(
        "bayes_factor_bridge: no direct attempts between the two models in "
        "one direction; further manipulation (indirect paths) is required "
        "and out of scope");

  const double mean_fwd = stats::mean(alpha_fwd);
  const double mean_rev = stats::mean(alpha_rev);
  BayesFactorEstimate estimate;
  estimate.value = mean_fwd / mean_rev;
  estimate.count_numerator = static_cast<long>(alpha_fwd.size());
  estimate.count_denominator = static_cast<long>(alpha_rev.size());

  const auto bm_fwd = batch_means(alpha_fwd, batches);
  const auto bm_rev = batch_means(alpha_rev, batches);
  const double var_fwd =
      stats::variance_sample(bm_fwd) / static_cast<double>(bm_fwd.size());
  const double var_rev =
      stats::variance_sample(bm_rev) / static_cast<double>(bm_rev.size());
  estimate.log_std_error = std::sqrt(var_fwd / (mean_fwd * mean_fwd) +
                                     var_rev / (mean_rev * mean_rev));
  return estimate;
}

}  // namespace rjmcmc::estimation
