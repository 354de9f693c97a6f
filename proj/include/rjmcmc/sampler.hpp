#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/move.hpp"
#include "rjmcmc/rng.hpp"
#include "rjmcmc/state.hpp"

namespace rjmcmc {

struct SamplerConfig {
  long iterations = 10000;
  long burn_in = 1000;
  long thinning = 1;
  int replicate_count = 1;
  std::uint64_t rng_seed = 0;
  double between_move_probability = 0.5;
  int starting_model = 0;  // model-space index
  // Per model index; empty vectors fall back to unit scales.
  std::vector<std::vector<double>> within_move_scales;
  int workers = 1;

  void validate(const ModelSpace& space) const;
};

struct StateRecord {
  long iteration = 0;
  int model_index = 0;
  std::vector<double> params;
  double log_likelihood = 0.0;
  double log_prior = 0.0;
  double deviance = 0.0;
};

struct AcceptanceRecord {
  long iteration = 0;
  int from_index = 0;
  int to_index = 0;
  double alpha = 0.0;  // min(1, A)
  bool accepted = false;
  bool burnin = false;
};

struct ReplicateTrace {
  int replicate = 0;
  std::vector<StateRecord> states;
  std::vector<AcceptanceRecord> acceptances;
};

struct Trace {
  std::vector<ReplicateTrace> replicates;
};

// log A for the between-model transition current -> proposed via `move`,
// in whichever orientation of the move matches the two states.
//   A = pi(proposed) q(k'->k) q_rev(u_rev) / [pi(current) q(k->k') q(u)]
//       * |Jacobian|
// `u` is the randomness consumed by this attempt, `u_rev` what the
// reverse attempt would consume. Non-finite target densities signal a
// rejected move (-inf), never an error; mismatched dimensions throw.
// `log_extra` folds in any additional factor symmetric machinery cannot
// know about (e.g. move-selection probabilities; added as log of the
// reverse-selection over forward-selection ratio).
double acceptance_log_ratio(const ChainState& current,
                            const ChainState& proposed,
                            const ModelSpace& space, const JumpMove& move,
                            const UVec& u, const UVec& u_rev,
                            double log_extra = 0.0);

// Joint Gaussian random-walk proposal with per-coordinate scales,
// Metropolis accepted. Zero-dimensional states are returned unchanged.
ChainState mh_within_model_step(const ChainState& state,
                                std::span<const double> scale,
                                const ModelDefinition& model, Rng& rng);

struct BetweenStepResult {
  ChainState state;
  // One record per proposal decision; empty for self-jumps, two entries
  // for a delayed-rejection attempt.
  std::vector<AcceptanceRecord> records;
};

// Destination and move drawn for one between-model attempt. log_extra is
// the move-selection correction log q_sel(k'->k) - log q_sel(k->k') that
// every acceptance ratio on this edge picks up.
struct EdgeSelection {
  int target = 0;
  MoveSet::Binding binding;
  double log_extra = 0.0;
};

// Draws the destination model from the jump graph and a move among those
// serving the edge; empty optional means a self-jump was drawn.
std::optional<EdgeSelection> select_between_move(const ChainState& state,
                                                 const ModelSpace& space,
                                                 const MoveSet& moves,
                                                 Rng& rng);

// One between-model attempt: select, propose, Metropolis-accept.
// Self-jumps leave the state untouched and record nothing.
BetweenStepResult rj_between_model_step(const ChainState& state,
                                        const ModelSpace& space,
                                        const MoveSet& moves, Rng& rng);

// Pluggable between-model kernel so multi-step schemes (delayed
// rejection, annealed jumps) can replace the plain step in the run loop.
using BetweenKernel = std::function<BetweenStepResult(
    const ChainState&, const ModelSpace&, const MoveSet&, Rng&)>;

ChainState initial_state(const SamplerConfig& config,
                         const ModelSpace& space, Rng& rng);

// Step 1-3 loop: within-model sweep, then with configured probability one
// between-model attempt; thinned post-burn-in states and all acceptance
// records (burn-in flagged) are kept. Fully deterministic given the seed;
// replicate r uses the (seed, r) sub-stream. Replicates run on up to
// `workers` threads and share only read-only structures.
Trace run_sampler(const SamplerConfig& config, const ModelSpace& space,
                  const MoveSet& moves,
                  const BetweenKernel& between_kernel = {});

}  // namespace rjmcmc
