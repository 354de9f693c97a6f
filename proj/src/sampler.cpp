#include "rjmcmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

namespace rjmcmc {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::vector<double> effective_scales(const SamplerConfig& config,
                                     const ModelSpace& space, int index) {
  const int dim = space.model(index).dimension();
  if (static_cast<std::size_t>(index) < config.within_move_scales.size()) {
    const auto& s = config.within_move_scales[static_cast<std::size_t>(index)];
    if (!s.empty()) return s;
  }
  return std::vector<double>(static_cast<std::size_t>(dim), 1.0);
}

}  // namespace

void SamplerConfig::validate(const ModelSpace& space) const {
  if (iterations <= 0)
    throw std::invalid_argument("SamplerConfig: iterations must be > 0");
  if (burn_in < 0 || burn_in >= iterations)
    throw std::invalid_argument("SamplerConfig: need 0 <= burn_in < iterations");
  if (thinning < 1)
    throw std::invalid_argument("SamplerConfig: thinning must be >= 1");
  if (replicate_count < 1)
    throw std::invalid_argument("SamplerConfig: replicate_count must be >= 1");
  if (!(between_move_probability >= 0.0 && between_move_probability <= 1.0))
    throw std::invalid_argument(
        "SamplerConfig: between_move_probability outside [0,1]");
  if (starting_model < 0 || starting_model >= space.size())
    throw std::invalid_argument("SamplerConfig: starting_model out of range");
  if (workers < 0)
    throw std::invalid_argument("SamplerConfig: workers must be >= 0");
  for (std::size_t i = 0; i < within_move_scales.size(); ++i) {
    const auto& s = within_move_scales[i];
    if (s.empty()) continue;
    if (static_cast<int>(i) >= space.size())
      throw std::invalid_argument("SamplerConfig: scales for unknown model");
    if (static_cast<int>(s.size()) != space.model(static_cast<int>(i)).dimension())
      throw std::invalid_argument("SamplerConfig: scale length mismatch for model index " +
                                  std::to_string(i));
    for (double v : s)
      if (!(v > 0.0))
        throw std::invalid_argument("SamplerConfig: scales must be > 0");
  }
}

double acceptance_log_ratio(const ChainState& current,
                            const ChainState& proposed,
                            const ModelSpace& space, const JumpMove& move,
                            const UVec& u, const UVec& u_rev,
                            double log_extra) {
  bool forward;
  if (current.model_index == move.from_index() &&
      proposed.model_index == move.to_index()) {
    forward = true;
  } else if (current.model_index == move.to_index() &&
             proposed.model_index == move.from_index()) {
    forward = false;
  } else {
    throw std::invalid_argument("acceptance_log_ratio: move " + move.name() +
                                " does not connect the given states");
  }

  const int d_going = forward ? move.u_dim() : move.u_dim_reverse();
  const int d_return = forward ? move.u_dim_reverse() : move.u_dim();
  if (static_cast<int>(u.values.size()) != d_going ||
      static_cast<int>(u_rev.values.size()) != d_return)
    throw std::invalid_argument(
        "acceptance_log_ratio: random-vector dimension mismatch for " +
        move.name());

  const double log_num_target =
      proposed.log_target() + space.log_model_prior(proposed.model_index);
  const double log_den_target =
      current.log_target() + space.log_model_prior(current.model_index);
  if (!finite(log_num_target) || !finite(log_den_target)) return -HUGE_VAL;

  const double q_to = space.jump_prob(current.model_index, proposed.model_index);
  const double q_back = space.jump_prob(proposed.model_index, current.model_index);
  if (!(q_to > 0.0) || !(q_back > 0.0)) return -HUGE_VAL;

  double log_q_going;
  double log_q_return;
  double log_jac;
  if (forward) {
    log_q_going = move.log_u_density_forward(current.params, u);
    log_q_return = move.log_u_density_reverse(proposed.params, u_rev);
    log_jac = move.log_jacobian_forward(current.params, u);
  } else {
    log_q_going = move.log_u_density_reverse(current.params, u);
    log_q_return = move.log_u_density_forward(proposed.params, u_rev);
    log_jac = -move.log_jacobian_forward(proposed.params, u_rev);
  }
  if (!finite(log_q_going) || !finite(log_jac)) return -HUGE_VAL;
  if (!finite(log_q_return)) return -HUGE_VAL;

  return log_num_target - log_den_target + std::log(q_back) - std::log(q_to) +
         log_q_return - log_q_going + log_jac + log_extra;
}

ChainState mh_within_model_step(const ChainState& state,
                                std::span<const double> scale,
                                const ModelDefinition& model, Rng& rng) {
  const int dim = model.dimension();
  if (dim == 0) return state;
  if (static_cast<int>(scale.size()) != dim)
    throw std::invalid_argument("mh_within_model_step: scale length mismatch");
  for (double s : scale)
    if (!(s > 0.0))
      throw std::invalid_argument("mh_within_model_step: scale must be > 0");

  std::vector<double> proposal(state.params);
  for (int i = 0; i < dim; ++i)
    proposal[static_cast<std::size_t>(i)] +=
        scale[static_cast<std::size_t>(i)] * rng.normal();

  const double prop_ll = model.log_likelihood(proposal);
  const double prop_lp = model.log_prior(proposal);
  const double log_ratio = prop_ll + prop_lp - state.log_target();
  const double coin = rng.uniform();
  if (!finite(prop_ll + prop_lp)) return state;
  if (std::log(coin) < log_ratio) {
    ChainState next = state;
    next.params = std::move(proposal);
    next.log_likelihood = prop_ll;
    next.log_prior = prop_lp;
    return next;
  }
  return state;
}

std::optional<EdgeSelection> select_between_move(const ChainState& state,
                                                 const ModelSpace& space,
                                                 const MoveSet& moves,
                                                 Rng& rng) {
  const int k = state.model_index;
  const auto& edges = space.jumps_from(k);
  if (edges.empty())
    throw std::invalid_argument("select_between_move: no jumps from index " +
                                std::to_string(k));
  std::vector<double> probs(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) probs[i] = edges[i].prob;
  const int target = edges[static_cast<std::size_t>(rng.categorical(probs))].target;
  if (target == k) return std::nullopt;

  const auto* list = moves.bindings(k, target);
  if (list == nullptr || list->empty())
    throw std::invalid_argument("select_between_move: no move for edge " +
                                std::to_string(k) + " -> " +
                                std::to_string(target));
  std::vector<double> weights(list->size());
  for (std::size_t i = 0; i < list->size(); ++i) weights[i] = (*list)[i].weight;
  EdgeSelection selection;
  selection.target = target;
  selection.binding = (*list)[static_cast<std::size_t>(rng.categorical(weights))];
  const double sel_fwd = moves.selection_prob(k, target, selection.binding.move);
  const double sel_rev = moves.selection_prob(target, k, selection.binding.move);
  selection.log_extra = std::log(sel_rev) - std::log(sel_fwd);
  return selection;
}

BetweenStepResult rj_between_model_step(const ChainState& state,
                                        const ModelSpace& space,
                                        const MoveSet& moves, Rng& rng) {
  const auto selection = select_between_move(state, space, moves, rng);
  if (!selection) return {state, {}};
  const JumpMove& move = *selection->binding.move;
  const int target = selection->target;

  AcceptanceRecord record;
  record.from_index = state.model_index;
  record.to_index = target;

  UVec u = selection->binding.forward
               ? move.sample_u_forward(state.params, rng)
               : move.sample_u_reverse(state.params, rng);
  std::vector<double> proposed_params;
  UVec u_rev;
  const bool ok = selection->binding.forward
                      ? move.apply_forward(state.params, u, proposed_params, u_rev)
                      : move.apply_reverse(state.params, u, proposed_params, u_rev);
  const double coin = rng.uniform();
  if (!ok) {
    // Degenerate proposal: a valid attempt that can never be accepted.
    record.alpha = 0.0;
    record.accepted = false;
    return {state, {record}};
  }
  if (static_cast<int>(proposed_params.size()) !=
      space.model(target).dimension())
    throw std::logic_error("rj_between_model_step: move " + move.name() +
                           " produced a vector of wrong length");

  ChainState proposed = space.make_state(target, std::move(proposed_params));
  const double log_a = acceptance_log_ratio(state, proposed, space, move, u,
                                            u_rev, selection->log_extra);

  double alpha = 0.0;
  if (!std::isnan(log_a)) alpha = std::min(1.0, std::exp(log_a));
  record.alpha = alpha;
  record.accepted = coin < alpha;
  return {record.accepted ? std::move(proposed) : state, {record}};
}

ChainState initial_state(const SamplerConfig& config, const ModelSpace& space,
                         Rng& rng) {
  const int k = config.starting_model;
  ChainState state =
      space.make_state(k, space.model(k).sample_prior(rng));
  if (!finite(state.log_target() + space.log_model_prior(k)))
    throw std::runtime_error(
        "run_sampler: model evaluation failed at the initial state for model "
        "index " +
        std::to_string(k));
  return state;
}

namespace {

ReplicateTrace run_replicate(int replicate, const SamplerConfig& config,
                             const ModelSpace& space, const MoveSet& moves,
                             const BetweenKernel& kernel) {
  Rng rng(config.rng_seed, static_cast<std::uint64_t>(replicate));
  ChainState state = initial_state(config, space, rng);

  std::vector<std::vector<double>> scales(
      static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i)
    scales[static_cast<std::size_t>(i)] = effective_scales(config, space, i);

  ReplicateTrace trace;
  trace.replicate = replicate;
  const long kept =
      (config.iterations - config.burn_in) / config.thinning + 1;
  trace.states.reserve(static_cast<std::size_t>(std::max(kept, 1L)));

  for (long t = 1; t <= config.iterations; ++t) {
    state = space.model(state.model_index)
                .within_model_update(
                    state, scales[static_cast<std::size_t>(state.model_index)],
                    rng);
    if (rng.uniform() < config.between_move_probability) {
      BetweenStepResult result = kernel
                                     ? kernel(state, space, moves, rng)
                                     : rj_between_model_step(state, space,
                                                             moves, rng);
      for (auto& record : result.records) {
        record.iteration = t;
        record.burnin = t <= config.burn_in;
        trace.acceptances.push_back(record);
      }
      state = std::move(result.state);
    }
    if (t > config.burn_in && (t - config.burn_in) % config.thinning == 0) {
      trace.states.push_back({t, state.model_index, state.params,
                              state.log_likelihood, state.log_prior,
                              state.deviance()});
    }
  }
  return trace;
}

}  // namespace

Trace run_sampler(const SamplerConfig& config, const ModelSpace& space,
                  const MoveSet& moves, const BetweenKernel& between_kernel) {
  config.validate(space);
  space.validate();
  if (config.between_move_probability > 0.0) moves.validate_against(space);

  Trace trace;
  trace.replicates.resize(static_cast<std::size_t>(config.replicate_count));

  int workers = config.workers;
  if (workers == 0)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, config.replicate_count));

  if (workers == 1) {
    for (int r = 0; r < config.replicate_count; ++r)
      trace.replicates[static_cast<std::size_t>(r)] =
          run_replicate(r, config, space, moves, between_kernel);
    return trace;
  }

  for (int start = 0; start < config.replicate_count; start += workers) {
    const int end = std::min(start + workers, config.replicate_count);
    std::vector<std::future<ReplicateTrace>> futures;
    futures.reserve(static_cast<std::size_t>(end - start));
    for (int r = start; r < end; ++r)
      futures.push_back(std::async(std::launch::async, run_replicate, r,
                                   std::cref(config), std::cref(space),
                                   std::cref(moves), std::cref(between_kernel)));
    for (int r = start; r < end; ++r)
      trace.replicates[static_cast<std::size_t>(r)] =
          futures[static_cast<std::size_t>(r - start)].get();
  }
  return trace;
}

}  // namespace rjmcmc
