#pragma once

#include <memory>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/models/mixture.hpp"
#include "rjmcmc/move.hpp"

namespace rjmcmc {

// A ready-to-run pairing of model space and move set. Moves hold
// references into the space, so the two travel together.
struct Problem {
  std::unique_ptr<ModelSpace> space;
  std::unique_ptr<MoveSet> moves;
};

struct MixtureMoveOptions {
  bool split_merge = true;
  bool birth_death = true;
  bool calibrate_split_u1 = false;
};

Problem make_mixture_problem(std::shared_ptr<const std::vector<double>> data,
                             const models::MixtureHyperParams& hyper,
                             int k_max, const MixtureMoveOptions& options = {});

}  // namespace rjmcmc
