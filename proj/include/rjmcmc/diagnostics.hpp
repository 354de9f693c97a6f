#pragma once

#include <span>
#include <string>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/rng.hpp"

namespace rjmcmc::diagnostics {

// Checkpoints are prefix lengths of the per-chain sequences: `count`
// evenly spaced cumulative cut points ending at the full length.
std::vector<std::size_t> checkpoint_grid(std::size_t length, int count = 20);

// Skipped checkpoints (too few thinned draws, degenerate tables) carry
// this marker in place of a p-value.
inline constexpr double kSkippedCheckpoint = -1.0;

// Pairwise two-sample Kolmogorov-Smirnov tests on lag-thinned
// model-indicator sequences, one curve per chain pair over checkpoints.
struct KsPairSeries {
  int chain_a = 0;
  int chain_b = 0;
  std::vector<double> statistic;
  std::vector<double> p_value;
};
struct KsResult {
  std::vector<std::size_t> checkpoints;
  std::vector<KsPairSeries> pairs;
  int lag = 1;
};
KsResult model_indicator_ks(const std::vector<std::vector<int>>& indicators,
                            int lag, int checkpoints = 20);

// All-chain contingency test of chain x model independence on thinned
// sequences; model columns with expected count below `min_expected` are
// pooled into one.
struct ChiSqResult {
  std::vector<std::size_t> checkpoints;
  std::vector<double> statistic;
  std::vector<double> df;
  std::vector<double> p_value;
  int lag = 1;
};
ChiSqResult model_indicator_chisq(
    const std::vector<std::vector<int>>& indicators, int lag,
    int checkpoints = 20, double min_expected = 5.0);

// Weighted two-way (chain x model) decomposition of a functional's
// variance, weights proportional to model-visit frequency. Both ratios
// approach one under convergence; population variances throughout, so
// identical chains give exactly one.
struct MpsrfResult {
  std::vector<std::size_t> checkpoints;
  std::vector<double> psrf_v;  // total vs within-chain variation
  std::vector<double> psrf_w;  // within-model vs within-model-within-chain
  long excluded_values = 0;    // non-finite functional evaluations
};
MpsrfResult mpsrf(const std::vector<std::vector<double>>& functional,
                  const std::vector<std::vector<int>>& indicators,
                  int checkpoints = 20);

// Point-to-nearest-event distance diagnostic: states are event sets in
// R^d (one coordinate vector per mixture component), distances are
// Euclidean after per-coordinate standardisation by the pooled standard
// deviation, and each reference point yields a PSRF curve across chains.
using EventSet = std::vector<std::vector<double>>;
struct DistancePsrfResult {
  std::vector<std::size_t> checkpoints;
  std::vector<std::vector<double>> reference_points;
  std::vector<std::vector<double>> psrf;  // [reference point][checkpoint]
  long empty_event_states = 0;            // flagged, excluded from curves
};
DistancePsrfResult distance_psrf(
    const std::vector<std::vector<EventSet>>& chains, int n_points, Rng& rng,
    int checkpoints = 20);

// Ordering-constraint relabelling for mixture parameter vectors
// [w | mu | var]: components sorted by mean, ties broken by weight then
// variance. Idempotent; the likelihood is permutation-invariant.
std::vector<double> relabel_by_constraint(std::span<const double> params);

// -2 log L, constant-free.
double deviance(const ModelDefinition& model, std::span<const double> params);

}  // namespace rjmcmc::diagnostics
