#include "doctest.h"

#include <cmath>
#include <vector>

#include "rjmcmc/moves/annealed.hpp"
#include "rjmcmc/moves/delayed_rejection.hpp"
#include "rjmcmc/sampler.hpp"
#include "support/discrete_toy.hpp"
#include "support/test_util.hpp"

using namespace rjmcmc;
using moves::AnnealedOptions;
using moves::make_annealed_kernel;
using moves::make_delayed_rejection_kernel;
using moves::TwoStageMove;
using test_support::BoxToy;

namespace {

std::vector<long> kernel_cell_counts(BoxToy& toy, const BetweenKernel& kernel,
                                     long iterations, long thin,
                                     std::uint64_t seed) {
  SamplerConfig config;
  config.iterations = iterations;
  config.burn_in = 2000;
  config.thinning = thin;
  config.rng_seed = seed;
  Trace t = run_sampler(config, *toy.space, *toy.moves, kernel);
  std::vector<long> counts(static_cast<std::size_t>(toy.total_cells()), 0);
  for (const auto& s : t.replicates[0].states) {
    ChainState tmp;
    tmp.model_index = s.model_index;
    tmp.params = s.params;
    counts[static_cast<std::size_t>(toy.flat_cell(tmp))]++;
  }
  return counts;
}

}  // namespace

TEST_CASE("two-stage wrapper: bijection and jacobian") {
  BoxToy toy = test_support::make_box_toy(2, 0.5);
  const auto* bindings = toy.moves->bindings(0, 1);
  REQUIRE(bindings != nullptr);
  const JumpMove& base = *(*bindings)[0].move;
  TwoStageMove stage2(base, 0.5);

  CHECK(stage2.u_dim() == 2);
  CHECK(stage2.u_dim_reverse() == 1);

  const std::vector<double> theta = {0.7};
  UVec u;
  u.values = {1.3, 1.8};
  std::vector<double> z;
  UVec u_rev;
  REQUIRE(stage2.apply_forward(theta, u, z, u_rev));
  CHECK(z == std::vector<double>{0.7, 0.9});  // shrink * u2
  CHECK(u_rev.values == std::vector<double>{1.3});

  std::vector<double> back;
  UVec u_back;
  REQUIRE(stage2.apply_reverse(z, u_rev, back, u_back));
  CHECK(back == std::vector<double>{0.7});
  CHECK(u_back.values[0] == doctest::Approx(1.3));
  CHECK(u_back.values[1] == doctest::Approx(1.8));

  // Jacobian of (x, u1, u2) -> (z, u1): base jacobian (0) + d log shrink.
  CHECK(stage2.log_jacobian_forward(theta, u) ==
        doctest::Approx(std::log(0.5)));
}

TEST_CASE("delayed rejection: stage 2 only runs after a stage-1 rejection") {
  BoxToy toy = test_support::make_box_toy(2, 0.5);
  auto kernel = make_delayed_rejection_kernel(0.5);
  Rng rng(70);
  ChainState state =
      toy.space->make_state(0, toy.space->model(0).sample_prior(rng));
  int singles = 0, doubles = 0;
  for (int i = 0; i < 4000; ++i) {
    state = toy.space->model(state.model_index)
                .within_model_update(
                    state, std::vector<double>(state.params.size(), 0.7), rng);
    auto result = kernel(state, *toy.space, *toy.moves, rng);
    if (result.records.size() == 1) {
      CHECK(result.records[0].accepted);
      ++singles;
    } else if (result.records.size() == 2) {
      CHECK_FALSE(result.records[0].accepted);
      ++doubles;
    }
    state = std::move(result.state);
  }
  CHECK(singles > 0);
  CHECK(doubles > 0);
}

TEST_CASE("delayed rejection: certain reverse first stage forces alpha2 = 0") {
  // Model 0 dominates the posterior, so every down-move is accepted with
  // probability 1 and the [1 - alpha1(z, w)] companion kills stage 2 of
  // every up-move.
  BoxToy toy = test_support::make_box_toy(2, 0.999);
  auto kernel = make_delayed_rejection_kernel(0.5);
  Rng rng(71);
  ChainState state =
      toy.space->make_state(0, toy.space->model(0).sample_prior(rng));
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    state = toy.space->model(state.model_index)
                .within_model_update(
                    state, std::vector<double>(state.params.size(), 0.7), rng);
    const bool up = state.model_index == 0;
    auto result = kernel(state, *toy.space, *toy.moves, rng);
    if (up && result.records.size() == 2) {
      CHECK(result.records[1].alpha == 0.0);
      ++checked;
    }
    state = std::move(result.state);
  }
  CHECK(checked > 10);
}

TEST_CASE("delayed rejection kernel preserves the exact box target") {
  BoxToy toy = test_support::make_box_toy(2, 0.45);
  const auto counts = kernel_cell_counts(
      toy, make_delayed_rejection_kernel(0.5), 400000, 20, 72);
  const auto gof = test_util::chi_squared_gof(counts, toy.exact_probs);
  INFO("chi2 = ", gof.statistic, ", p = ", gof.p_value);
  CHECK(gof.p_value > 0.01);
}

TEST_CASE("annealed with kappa = 0 reproduces the plain kernel exactly") {
  BoxToy toy = test_support::make_box_toy(2, 0.5);
  SamplerConfig config;
  config.iterations = 20000;
  config.burn_in = 100;
  config.rng_seed = 73;

  AnnealedOptions options;
  options.gamma = 2.0;
  options.kappa = 0;
  Trace annealed =
      run_sampler(config, *toy.space, *toy.moves, make_annealed_kernel(options));
  Trace plain = run_sampler(config, *toy.space, *toy.moves);

  REQUIRE(annealed.replicates[0].acceptances.size() ==
          plain.replicates[0].acceptances.size());
  for (std::size_t i = 0; i < plain.replicates[0].acceptances.size(); ++i) {
    CHECK(annealed.replicates[0].acceptances[i].alpha ==
          plain.replicates[0].acceptances[i].alpha);
    CHECK(annealed.replicates[0].acceptances[i].accepted ==
          plain.replicates[0].acceptances[i].accepted);
  }
  REQUIRE(annealed.replicates[0].states.size() ==
          plain.replicates[0].states.size());
  for (std::size_t i = 0; i < plain.replicates[0].states.size(); ++i)
    CHECK(annealed.replicates[0].states[i].params ==
          plain.replicates[0].states[i].params);
}

TEST_CASE("annealed kernel preserves the target for gamma = 1, kappa = 5") {
  BoxToy toy = test_support::make_box_toy(2, 0.5);
  AnnealedOptions options;
  options.gamma = 1.0;
  options.kappa = 5;
  options.within_scale = 0.6;
  const auto counts =
      kernel_cell_counts(toy, make_annealed_kernel(options), 300000, 15, 74);
  const auto gof = test_util::chi_squared_gof(counts, toy.exact_probs);
  INFO("chi2 = ", gof.statistic, ", p = ", gof.p_value);
  CHECK(gof.p_value > 0.01);
}

TEST_CASE("annealed kernel preserves the target for gamma = 2, kappa = 5") {
  BoxToy toy = test_support::make_box_toy(2, 0.5);
  AnnealedOptions options;
  options.gamma = 2.0;
  options.kappa = 5;
  options.within_scale = 0.6;
  const auto counts =
      kernel_cell_counts(toy, make_annealed_kernel(options), 300000, 15, 75);
  const auto gof = test_util::chi_squared_gof(counts, toy.exact_probs);
  INFO("chi2 = ", gof.statistic, ", p = ", gof.p_value);
  CHECK(gof.p_value > 0.01);
}
