#include "rjmcmc/problems.hpp"

#include <stdexcept>

#include "rjmcmc/moves/birth_death.hpp"
#include "rjmcmc/moves/split_merge.hpp"

namespace rjmcmc {

Problem make_mixture_problem(std::shared_ptr<const std::vector<double>> data,
                             const models::MixtureHyperParams& hyper,
                             int k_max, const MixtureMoveOptions& options) {
  if (!options.split_merge && !options.birth_death)
    throw std::invalid_argument("make_mixture_problem: empty move set");
  Problem problem;
  problem.space = models::make_mixture_space(data, hyper, k_max);
  problem.moves = std::make_unique<MoveSet>();
  for (int k = 1; k < k_max; ++k) {
    const auto& low =
        static_cast<const models::MixtureModel&>(problem.space->model(k - 1));
    const auto& high =
        static_cast<const models::MixtureModel&>(problem.space->model(k));
    if (options.split_merge)
      problem.moves->add(std::make_unique<moves::MixtureSplitMergeMove>(
          k - 1, k, low, high, options.calibrate_split_u1));
    if (options.birth_death)
      problem.moves->add(std::make_unique<moves::MixtureBirthDeathMove>(
          k - 1, k, low, high));
  }
  return problem;
}

}  // namespace rjmcmc
