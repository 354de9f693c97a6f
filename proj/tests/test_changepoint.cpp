#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "rjmcmc/models/changepoint.hpp"
#include "rjmcmc/models/simulate.hpp"
#include "rjmcmc/sampler.hpp"
#include "rjmcmc/stats.hpp"
#include "support/test_util.hpp"

using namespace rjmcmc;
using models::ChangePointBirthDeathMove;
using models::ChangePointHyperParams;
using models::ChangePointModel;

namespace {

std::shared_ptr<const std::vector<double>> share(std::vector<double> v) {
  return std::make_shared<const std::vector<double>>(std::move(v));
}

}  // namespace

TEST_CASE("homogeneous process: n log(lambda) - lambda T") {
  auto events = share({0.5, 2.0, 3.7, 9.1});
  ChangePointModel model(0, events, 10.0, ChangePointHyperParams{});
  const double lambda = 1.7;
  CHECK(model.log_likelihood(std::vector<double>{lambda}) ==
        doctest::Approx(4.0 * std::log(lambda) - lambda * 10.0)
            .epsilon(1e-12));
}

TEST_CASE("void probability: no events, k = 0") {
  auto events = share(std::vector<double>{});
  ChangePointModel model(0, events, 10.0, ChangePointHyperParams{});
  CHECK(model.log_likelihood(std::vector<double>{2.0}) ==
        doctest::Approx(-20.0).epsilon(1e-12));
}

TEST_CASE("two-change-point instance matches a quadrature oracle") {
  Rng rng(90);
  std::vector<double> events;
  for (int i = 0; i < 40; ++i) events.push_back(rng.uniform(0.0, 10.0));
  std::sort(events.begin(), events.end());
  auto shared = share(events);
  ChangePointModel model(2, shared, 10.0, ChangePointHyperParams{});

  const std::vector<double> params = {2.5, 7.0, 0.8, 3.0, 1.2};
  auto rate = [&](double t) {
    if (t < 2.5) return 0.8;
    if (t < 7.0) return 3.0;
    return 1.2;
  };
  // Midpoint quadrature of the integrated rate.
  double integral = 0.0;
  const int cells = 200000;
  for (int i = 0; i < cells; ++i)
    integral += rate((i + 0.5) * 10.0 / cells) * 10.0 / cells;
  double expect = -integral;
  for (double t : events) expect += std::log(rate(t));
  CHECK(model.log_likelihood(params) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("event outside the horizon is rejected at construction") {
  CHECK_THROWS_AS(ChangePointModel(0, share({0.5, 11.0}), 10.0,
                                   ChangePointHyperParams{}),
                  std::invalid_argument);
}

TEST_CASE("position prior matches the even-order-statistics density") {
  auto events = share(std::vector<double>{});
  ChangePointHyperParams hyper;
  hyper.height_shape = 1.0;
  hyper.height_rate = 1.0;
  ChangePointModel model(1, events, 10.0, hyper);
  // k = 1: f(pos) = 3! pos (T - pos) / T^3; heights Gamma(1,1) = Exp(1).
  const std::vector<double> params = {4.0, 0.5, 2.0};
  const double expect = std::log(6.0 * 4.0 * 6.0 / 1000.0) +
                        stats::log_gamma_pdf(0.5, 1.0, 1.0) +
                        stats::log_gamma_pdf(2.0, 1.0, 1.0);
  CHECK(model.log_prior(params) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("birth preserves the integrated rate and inverts exactly") {
  auto events = share(std::vector<double>{1.0, 5.0});
  ChangePointHyperParams hyper;
  ChangePointModel low(1, events, 10.0, hyper);
  ChangePointModel high(2, events, 10.0, hyper);
  ChangePointBirthDeathMove move(1, 2, low, high);
  Rng rng(91);

  const std::vector<double> theta = {4.0, 1.5, 0.6};
  for (int rep = 0; rep < 200; ++rep) {
    UVec u = move.sample_u_forward(theta, rng);
    std::vector<double> up;
    UVec u_rev;
    REQUIRE(move.apply_forward(theta, u, up, u_rev));
    REQUIRE(up.size() == 5);

    // Integrated rate unchanged by the birth.
    auto integral = [&](const std::vector<double>& p, int k) {
      double acc = 0.0, prev = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double end = j < k ? p[static_cast<std::size_t>(j)] : 10.0;
        acc += p[static_cast<std::size_t>(k + j)] * (end - prev);
        prev = end;
      }
      return acc;
    };
    CHECK(integral(up, 2) == doctest::Approx(integral(theta, 1)).epsilon(1e-12));

    std::vector<double> down;
    UVec u_back;
    REQUIRE(move.apply_reverse(up, u_rev, down, u_back));
    for (std::size_t i = 0; i < theta.size(); ++i)
      CHECK(down[i] == doctest::Approx(theta[i]).epsilon(1e-12));
    CHECK(u_back.values[0] == doctest::Approx(u.values[0]).epsilon(1e-12));
    CHECK(u_back.values[1] == doctest::Approx(u.values[1]).epsilon(1e-12));
  }
}

TEST_CASE("birth jacobian matches finite differences") {
  auto events = share(std::vector<double>{});
  ChangePointHyperParams hyper;
  ChangePointModel low(1, events, 10.0, hyper);
  ChangePointModel high(2, events, 10.0, hyper);
  ChangePointBirthDeathMove move(1, 2, low, high);
  Rng rng(92);

  for (int rep = 0; rep < 30; ++rep) {
    const std::vector<double> theta = {rng.uniform(2.0, 8.0),
                                       rng.uniform(0.3, 3.0),
                                       rng.uniform(0.3, 3.0)};
    const double pos = rng.uniform(0.5, 9.5);
    const double v = rng.uniform(0.2, 0.8);
    // Map (kappa1, h0, h1, pos, v) -> 5 outputs.
    auto map = [&](const std::vector<double>& x) {
      UVec u;
      u.values = {x[3], x[4]};
      std::vector<double> out;
      UVec u_rev;
      if (!move.apply_forward(std::vector<double>{x[0], x[1], x[2]}, u, out,
                              u_rev))
        throw std::runtime_error("degenerate");
      return out;
    };
    UVec u;
    u.values = {pos, v};
    const double fd =
        test_util::fd_log_abs_det(map, {theta[0], theta[1], theta[2], pos, v},
                                  1e-7);
    CHECK(move.log_jacobian_forward(theta, u) ==
          doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("no-event posterior over k matches an integration oracle") {
  // With no events the likelihood is the void probability exp(-int h),
  // so p(k | nothing) ~ p(k) m_k with
  //   m_k = E_positions[ prod_j (b / (b + len_j))^a ],
  // the Gamma transform integrated over the position prior. The oracle
  // integrates by plain Monte Carlo, independent of the sampler path.
  const double horizon = 10.0;
  auto events = share(std::vector<double>{});
  ChangePointHyperParams hyper;
  hyper.k_max = 4;
  hyper.poisson_nu = 1.0;
  auto problem = models::make_changepoint_problem(events, horizon, hyper);

  Rng oracle_rng(915);
  std::vector<double> marginal(5, 0.0);
  const int draws = 200000;
  for (int k = 0; k <= 4; ++k) {
    const auto& model = problem.space->model(k);
    double acc = 0.0;
    for (int rep = 0; rep < draws; ++rep) {
      const auto params = model.sample_prior(oracle_rng);
      double prev = 0.0;
      double prod = 1.0;
      for (int j = 0; j <= k; ++j) {
        const double end =
            j < k ? params[static_cast<std::size_t>(j)] : horizon;
        prod *= std::pow(
            hyper.height_rate / (hyper.height_rate + (end - prev)),
            hyper.height_shape);
        prev = end;
      }
      acc += prod;
    }
    marginal[static_cast<std::size_t>(k)] = acc / draws;
  }
  std::vector<double> probs(5);
  double z = 0.0;
  for (int k = 0; k <= 4; ++k) {
    probs[static_cast<std::size_t>(k)] =
        std::exp(stats::log_truncated_poisson_pmf(k, 1.0, 4)) *
        marginal[static_cast<std::size_t>(k)];
    z += probs[static_cast<std::size_t>(k)];
  }
  for (double& p : probs) p /= z;

  SamplerConfig config;
  config.iterations = 200000;
  config.burn_in = 5000;
  config.thinning = 10;
  config.rng_seed = 93;
  Trace trace = run_sampler(config, *problem.space, *problem.moves);
  std::vector<long> counts(5, 0);
  for (const auto& s : trace.replicates[0].states)
    counts[static_cast<std::size_t>(s.model_index)]++;
  long total = 0;
  for (long c : counts) total += c;
  for (int k = 0; k <= 4; ++k) {
    const double observed =
        static_cast<double>(counts[static_cast<std::size_t>(k)]) /
        static_cast<double>(total);
    INFO("k = ", k, ": observed ", observed, ", oracle ",
         probs[static_cast<std::size_t>(k)]);
    CHECK(std::abs(observed - probs[static_cast<std::size_t>(k)]) < 0.015);
  }
}

TEST_CASE("simulators: poisson count and ar autocorrelation oracles") {
  Rng rng(94);
  // Change-point simulator, constant rate: mean count lambda * T.
  double total = 0.0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep)
    total += static_cast<double>(
        models::simulate_changepoint({}, std::vector<double>{2.0}, 10.0, rng)
            .size());
  const double mean_count = total / reps;
  CHECK(std::abs(mean_count - 20.0) < 3.0 * std::sqrt(20.0 / reps));

  // AR(2) simulator: sample autocorrelations near Yule-Walker values.
  const std::vector<double> a = {0.5, -0.3};
  const auto series = models::simulate_ar(a, 1.0, 5000, rng);
  auto acf = [&](int lag) {
    double num = 0.0, den = 0.0, mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(series.size());
    for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < series.size();
         ++t)
      num += (series[t] - mean) * (series[t + static_cast<std::size_t>(lag)] - mean);
    for (double x : series) den += (x - mean) * (x - mean);
    return num / den;
  };
  const double rho1 = a[0] / (1.0 - a[1]);
  const double rho2 = a[0] * rho1 + a[1];
  CHECK(std::abs(acf(1) - rho1) < 0.1);
  CHECK(std::abs(acf(2) - rho2) < 0.1);

  // Mixture simulator: three well-separated components give a trimodal
  // histogram (valleys between the means are nearly empty).
  std::vector<models::MixtureComponent> comps = {
      {0.3, -10.0, 1.0}, {0.4, 0.0, 1.0}, {0.3, 10.0, 1.0}};
  const auto data = models::simulate_mixture(comps, 245, rng);
  CHECK(data.size() == 245);
  long near_means = 0, in_valleys = 0;
  for (double x : data) {
    if (std::abs(x + 10.0) < 3.0 || std::abs(x) < 3.0 ||
        std::abs(x - 10.0) < 3.0)
      ++near_means;
    if (std::abs(x + 5.0) < 1.5 || std::abs(x - 5.0) < 1.5) ++in_valleys;
  }
  CHECK(near_means > 230);
  CHECK(in_valleys < 5);
}
