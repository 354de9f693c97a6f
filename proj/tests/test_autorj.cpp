#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <vector>

#include "rjmcmc/moves/autorj.hpp"
#include "rjmcmc/sampler.hpp"
#include "support/discrete_toy.hpp"
#include "support/pair_toy.hpp"
#include "support/test_util.hpp"

using namespace rjmcmc;
using moves::AutoRjMove;
using moves::estimate_moments_pilot;
using moves::ModelMoments;
using test_support::ProductNormalModel;

namespace {

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix signs so Q is a proper draw (not needed for orthogonality).
  return q;
}

ModelMoments gaussian_moments(int dim, double sd) {
  ModelMoments m;
  m.mean = Eigen::VectorXd::Zero(dim);
  m.root = sd * Eigen::MatrixXd::Identity(dim, dim);
  return m;
}

}  // namespace

TEST_CASE("identity case: matching moments and identity rotation copy theta") {
  AutoRjMove move(0, 1, gaussian_moments(2, 1.3), gaussian_moments(2, 1.3));
  const std::vector<double> theta = {0.4, -0.9};
  std::vector<double> out;
  UVec u_rev;
  REQUIRE(move.apply_forward(theta, UVec{}, out, u_rev));
  CHECK(out[0] == doctest::Approx(theta[0]).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(theta[1]).epsilon(1e-14));
}

TEST_CASE("exact Gaussian targets give unit acceptance in all three cases") {
  // Constant likelihood, Gaussian priors: the posterior of each model is
  // exactly Gaussian with known moments.
  ModelSpace space;
  space.add_model(std::make_unique<ProductNormalModel>(1, 1, 0.7), 1.0 / 3.0);
  space.add_model(std::make_unique<ProductNormalModel>(2, 2, 1.9), 1.0 / 3.0);
  space.add_model(std::make_unique<ProductNormalModel>(3, 3, 0.4), 1.0 / 3.0);
  space.set_jumps(0, {{1, 0.5}, {2, 0.5}});
  space.set_jumps(1, {{0, 0.5}, {2, 0.5}});
  space.set_jumps(2, {{0, 0.5}, {1, 0.5}});
  space.validate();

  Rng rng(80);
  for (auto [from, to] : std::vector<std::pair<int, int>>{
           {0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}}) {
    const int n_from = space.model(from).dimension();
    const int n_to = space.model(to).dimension();
    const double sd_from = from == 0 ? 0.7 : (from == 1 ? 1.9 : 0.4);
    const double sd_to = to == 0 ? 0.7 : (to == 1 ? 1.9 : 0.4);
    const Eigen::MatrixXd r =
        random_orthogonal(std::max(n_from, n_to), rng);
    AutoRjMove move(from, to, gaussian_moments(n_from, sd_from),
                    gaussian_moments(n_to, sd_to), r);
    for (int rep = 0; rep < 50; ++rep) {
      ChainState x =
          space.make_state(from, space.model(from).sample_prior(rng));
      UVec u = move.sample_u_forward(x.params, rng);
      std::vector<double> mapped;
      UVec u_rev;
      REQUIRE(move.apply_forward(x.params, u, mapped, u_rev));
      ChainState y = space.make_state(to, mapped);
      const double log_a = acceptance_log_ratio(x, y, space, move, u, u_rev);
      CHECK(std::abs(log_a) < 1e-9);
    }
  }
}

TEST_CASE("round trip through a random rotation recovers theta and u") {
  Rng rng(81);
  for (int rep = 0; rep < 100; ++rep) {
    ModelMoments low;
    low.mean = Eigen::VectorXd::Random(2);
    low.root = Eigen::MatrixXd::Random(2, 2) +
               3.0 * Eigen::MatrixXd::Identity(2, 2);
    ModelMoments high;
    high.mean = Eigen::VectorXd::Random(4);
    high.root = Eigen::MatrixXd::Random(4, 4) +
                3.0 * Eigen::MatrixXd::Identity(4, 4);
    AutoRjMove move(0, 1, low, high, random_orthogonal(4, rng));

    const std::vector<double> theta = {rng.normal(), rng.normal()};
    UVec u = move.sample_u_forward(theta, rng);
    std::vector<double> up;
    UVec u_rev;
    REQUIRE(move.apply_forward(theta, u, up, u_rev));
    CHECK(up.size() == 4);
    CHECK(u_rev.values.empty());

    std::vector<double> down;
    UVec u_back;
    REQUIRE(move.apply_reverse(up, u_rev, down, u_back));
    for (int i = 0; i < 2; ++i)
      CHECK(down[static_cast<std::size_t>(i)] ==
            doctest::Approx(theta[static_cast<std::size_t>(i)]).epsilon(1e-10));
    for (int i = 0; i < 2; ++i)
      CHECK(u_back.values[static_cast<std::size_t>(i)] ==
            doctest::Approx(u.values[static_cast<std::size_t>(i)])
                .epsilon(1e-10));
  }
}

TEST_CASE("jacobian equals log |det B'| - log |det B| by finite differences") {
  Rng rng(82);
  ModelMoments low;
  low.mean = Eigen::VectorXd::Random(1);
  low.root = Eigen::MatrixXd::Random(1, 1) +
             2.0 * Eigen::MatrixXd::Identity(1, 1);
  ModelMoments high;
  high.mean = Eigen::VectorXd::Random(2);
  high.root = Eigen::MatrixXd::Random(2, 2) +
              2.0 * Eigen::MatrixXd::Identity(2, 2);
  AutoRjMove move(0, 1, low, high, random_orthogonal(2, rng));

  auto map = [&](const std::vector<double>& x) {
    UVec u;
    u.values = {x[1]};
    std::vector<double> out;
    UVec u_rev;
    move.apply_forward(std::vector<double>{x[0]}, u, out, u_rev);
    return out;
  };
  const double fd = test_util::fd_log_abs_det(map, {0.3, -0.8});
  CHECK(move.log_jacobian_forward(std::vector<double>{0.3}, UVec{}) ==
        doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("non-invertible moment root is rejected at construction") {
  ModelMoments bad;
  bad.mean = Eigen::VectorXd::Zero(2);
  bad.root = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(AutoRjMove(0, 1, bad, gaussian_moments(2, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("pilot moments recover a known Gaussian") {
  ModelSpace space;
  space.add_model(std::make_unique<ProductNormalModel>(2, 1, 1.5), 1.0);
  space.set_jumps(0, {{0, 1.0}});
  Rng rng(83);
  const auto moments = estimate_moments_pilot(space, 0, 40000, 4000, 1.5, rng);
  CHECK(std::abs(moments.mean(0)) < 0.1);
  CHECK(std::abs(moments.mean(1)) < 0.1);
  const Eigen::MatrixXd cov = moments.root * moments.root.transpose();
  CHECK(cov(0, 0) == doctest::Approx(2.25).epsilon(0.15));
  CHECK(cov(1, 1) == doctest::Approx(2.25).epsilon(0.15));
  CHECK(std::abs(cov(0, 1)) < 0.25);
}

TEST_CASE("auto-rj kernel preserves the exact box target") {
  test_support::BoxToy toy = test_support::make_box_toy(2, 0.5);
  // Replace the append move by an auto-rj jump with rough moments.
  auto moves = std::make_unique<MoveSet>();
  ModelMoments low;
  low.mean = Eigen::VectorXd::Constant(1, 1.0);
  low.root = Eigen::MatrixXd::Identity(1, 1) * 0.6;
  ModelMoments high;
  high.mean = Eigen::VectorXd::Constant(2, 1.0);
  high.root = Eigen::MatrixXd::Identity(2, 2) * 0.6;
  moves->add(std::make_unique<AutoRjMove>(0, 1, low, high));

  SamplerConfig config;
  config.iterations = 400000;
  config.burn_in = 2000;
  config.thinning = 20;
  config.rng_seed = 84;
  Trace t = run_sampler(config, *toy.space, *moves);
  std::vector<long> counts(static_cast<std::size_t>(toy.total_cells()), 0);
  for (const auto& s : t.replicates[0].states) {
    ChainState tmp;
    tmp.model_index = s.model_index;
    tmp.params = s.params;
    counts[static_cast<std::size_t>(toy.flat_cell(tmp))]++;
  }
  const auto gof = test_util::chi_squared_gof(counts, toy.exact_probs);
  INFO("chi2 = ", gof.statistic, ", p = ", gof.p_value);
  CHECK(gof.p_value > 0.01);
}
