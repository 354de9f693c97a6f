#pragma once

#include "rjmcmc/move.hpp"
#include "rjmcmc/sampler.hpp"

namespace rjmcmc::moves {

// Annealed between-model jumps: the dimension-changing proposal is
// refined by kappa fixed-dimension random-walk steps targeting the
// tempered density pi^gamma before the single accept/reject decision.
// The reverse move runs the tempered steps first, then the (deterministic)
// dimension change, so the displayed two-density ratio keeps pi invariant
// for every gamma >= 1 and kappa >= 0.
struct AnnealedOptions {
  double gamma = 1.0;
  long kappa = 0;
  double within_scale = 0.5;  // RW scale of the tempered refinement steps
};

BetweenStepResult annealed_jump_step(const ChainState& state,
                                     const ModelSpace& space,
                                     const JumpMove& jump,
                                     bool forward_orientation,
                                     double log_extra,
                                     const AnnealedOptions& options, Rng& rng);

BetweenKernel make_annealed_kernel(AnnealedOptions options);

}  // namespace rjmcmc::moves
