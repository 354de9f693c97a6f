#include "rjmcmc/moves/annealed.hpp"

#include <cmath>
#include <stdexcept>

namespace rjmcmc::moves {

namespace {

// One random-walk Metropolis step targeting pi^gamma within the state's
// model. Caches stay those of the untempered densities.
ChainState tempered_rw_step(const ChainState& state,
                            const ModelDefinition& model, double gamma,
                            double scale, Rng& rng) {
  const int dim = model.dimension();
  if (dim == 0) return state;
  std::vector<double> proposal(state.params);
  for (double& p : proposal) p += scale * rng.normal();
  const double ll = model.log_likelihood(proposal);
  const double lp = model.log_prior(proposal);
  const double coin = rng.uniform();
  if (!std::isfinite(ll + lp)) return state;
  if (std::log(coin) < gamma * (ll + lp - state.log_target())) {
    ChainState next = state;
    next.params = std::move(proposal);
    next.log_likelihood = ll;
    next.log_prior = lp;
    return next;
  }
  return state;
}

double capped_alpha(double log_a) {
  if (std::isnan(log_a)) return 0.0;
  return std::min(1.0, std::exp(log_a));
}

}  // namespace

BetweenStepResult annealed_jump_step(const ChainState& state,
                                     const ModelSpace& space,
                                     const JumpMove& jump,
                                     bool forward_orientation,
                                     double log_extra,
                                     const AnnealedOptions& options, Rng& rng) {
  if (!jump.deterministic_reverse())
    throw std::invalid_argument(
        "annealed_jump_step: move must have a deterministic reverse (" +
        jump.name() + ")");
  if (!(options.gamma >= 1.0))
    throw std::invalid_argument("annealed_jump_step: gamma must be >= 1");
  if (options.kappa < 0)
    throw std::invalid_argument("annealed_jump_step: kappa must be >= 0");

  const int target =
      forward_orientation ? jump.to_index() : jump.from_index();
  AcceptanceRecord record;
  record.from_index = state.model_index;
  record.to_index = target;

  double log_a = 0.0;
  ChainState landing;
  bool ok = false;

  if (forward_orientation) {
    UVec u = jump.sample_u_forward(state.params, rng);
    std::vector<double> prop_params;
    UVec u_rev;
    ok = jump.apply_forward(state.params, u, prop_params, u_rev);
    if (ok) {
      ChainState entry = space.make_state(target, std::move(prop_params));
      ChainState refined = entry;
      for (long i = 0; i < options.kappa; ++i)
        refined = tempered_rw_step(refined, space.model(target), options.gamma,
                                   options.within_scale, rng);
      log_a = refined.log_target() + space.log_model_prior(target) -
              state.log_target() - space.log_model_prior(state.model_index) +
              options.gamma * (entry.log_target() - refined.log_target()) +
              std::log(space.jump_prob(target, state.model_index)) -
              std::log(space.jump_prob(state.model_index, target)) -
              jump.log_u_density_forward(state.params, u) +
              jump.log_jacobian_forward(state.params, u) + log_extra;
      landing = std::move(refined);
    }
  } else {
    // Tempered steps first, then the deterministic projection.
    ChainState refined = state;
    for (long i = 0; i < options.kappa; ++i)
      refined = tempered_rw_step(refined, space.model(state.model_index),
                                 options.gamma, options.within_scale, rng);
    std::vector<double> down_params;
    UVec u_rec;
    ok = jump.apply_reverse(refined.params, UVec{}, down_params, u_rec);
    if (ok) {
      ChainState entry = space.make_state(target, std::move(down_params));
      log_a = entry.log_target() + space.log_model_prior(target) -
              state.log_target() - space.log_model_prior(state.model_index) +
              options.gamma * (state.log_target() - refined.log_target()) +
              std::log(space.jump_prob(target, state.model_index)) -
              std::log(space.jump_prob(state.model_index, target)) +
              jump.log_u_density_forward(entry.params, u_rec) -
              jump.log_jacobian_forward(entry.params, u_rec) + log_extra;
      landing = std::move(entry);
    }
  }

  const double coin = rng.uniform();
  record.alpha = ok ? capped_alpha(log_a) : 0.0;
  record.accepted = coin < record.alpha;
  return {record.accepted ? std::move(landing) : state, {record}};
}

BetweenKernel make_annealed_kernel(AnnealedOptions options) {
  return [options](const ChainState& state, const ModelSpace& space,
                   const MoveSet& moves, Rng& rng) -> BetweenStepResult {
    const auto selection = select_between_move(state, space, moves, rng);
    if (!selection) return {state, {}};
    return annealed_jump_step(state, space, *selection->binding.move,
                              selection->binding.forward, selection->log_extra,
                              options, rng);
  };
}

}  // namespace rjmcmc::moves
