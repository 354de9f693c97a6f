#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rjmcmc/rng.hpp"
#include "rjmcmc/state.hpp"

namespace rjmcmc {

// One candidate model: a fixed-dimension parameter space with prior and
// likelihood. Evaluations must be pure; instances are shared read-only
// between replicate chains.
class ModelDefinition {
public:
  virtual ~ModelDefinition() = default;

  virtual int dimension() const = 0;
  // Reported model index (number of components / AR order / ...).
  virtual int label() const = 0;
  virtual std::string name() const = 0;

  virtual double log_prior(std::span<const double> params) const = 0;
  virtual double log_likelihood(std::span<const double> params) const = 0;
  virtual std::vector<double> sample_prior(Rng& rng) const = 0;

  // Hook for model-specific within-model kernels (Gibbs sweeps etc.).
  // The default is a joint Gaussian random walk with per-coordinate
  // scales, Metropolis-accepted; see mh_within_model_step.
  virtual ChainState within_model_update(const ChainState& state,
                                         std::span<const double> scales,
                                         Rng& rng) const;
};

struct JumpEdge {
  int target = 0;
  double prob = 0.0;
};

// The collection of candidate models with the model prior p(k) and the
// between-model proposal graph q(k -> k'). Indices are positions in the
// model vector; labels are whatever the models report.
class ModelSpace {
public:
  void add_model(std::unique_ptr<ModelDefinition> model, double prior_prob);

  // Nearest-neighbour graph k <-> k+1 with q = 1/2 each way and the
  // boundary mass folded into the inward move. A single model gets a
  // self-jump of mass one.
  void use_nearest_neighbour_jumps();
  void set_jumps(int from, std::vector<JumpEdge> edges);

  // Checks the prior sums to one, each jump row sums to one, and the
  // graph is reversible (q(k->k') > 0 implies q(k'->k) > 0).
  void validate() const;

  int size() const { return static_cast<int>(models_.size()); }
  const ModelDefinition& model(int index) const { return *models_.at(static_cast<std::size_t>(index)); }
  double model_prior(int index) const { return prior_.at(static_cast<std::size_t>(index)); }
  double log_model_prior(int index) const;
  const std::vector<JumpEdge>& jumps_from(int index) const { return jumps_.at(static_cast<std::size_t>(index)); }
  // q(from -> to); zero when the edge is absent.
  double jump_prob(int from, int to) const;
  int index_of_label(int label) const;

  // Builds a state with freshly evaluated caches.
  ChainState make_state(int index, std::vector<double> params) const;

private:
  std::vector<std::unique_ptr<ModelDefinition>> models_;
  std::vector<double> prior_;
  std::vector<std::vector<JumpEdge>> jumps_;
};

}  // namespace rjmcmc
