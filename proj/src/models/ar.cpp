#include "rjmcmc/models/ar.hpp"

#include <cmath>
#include <stdexcept>

#include "rjmcmc/models/toy.hpp"
#include "rjmcmc/sampler.hpp"
#include "rjmcmc/stats.hpp"

namespace rjmcmc::models {

namespace st = rjmcmc::stats;

ArHyperParams ArHyperParams::defaults_for(std::span<const double> series) {
  ArHyperParams hp;
  if (series.size() > 1) {
    std::vector<double> v(series.begin(), series.end());
    hp.noise_scale = st::variance_sample(v);
  }
  return hp;
}

ArModel::ArModel(int k, std::shared_ptr<const std::vector<double>> series,
                 ArHyperParams hyper, int condition_on)
    : k_(k),
      series_(std::move(series)),
      hyper_(hyper),
      condition_on_(condition_on < 0 ? k : condition_on) {
  if (k_ < 1) throw std::invalid_argument("ArModel: order must be >= 1");
  if (!series_) throw std::invalid_argument("ArModel: null series");
  if (condition_on_ < k_)
    throw std::invalid_argument("ArModel: conditioning window shorter than k");
  if (static_cast<int>(series_->size()) <= condition_on_)
    throw std::invalid_argument("ArModel: series shorter than k+1");
}

double ArModel::log_prior(std::span<const double> params) const {
  const double noise_var = params[static_cast<std::size_t>(k_)];
  if (!(noise_var > 0.0)) return st::kNegInf;
  double acc =
      st::log_inverse_gamma_pdf(noise_var, hyper_.noise_shape, hyper_.noise_scale);
  for (int i = 0; i < k_; ++i)
    acc += st::log_normal_pdf(params[static_cast<std::size_t>(i)], 0.0,
                              hyper_.coef_sd);
  return acc;
}

double ArModel::log_likelihood(std::span<const double> params) const {
  const auto& x = *series_;
  const double noise_var = params[static_cast<std::size_t>(k_)];
  if (!(noise_var > 0.0)) return st::kNegInf;
  const double sd = std::sqrt(noise_var);
  double acc = 0.0;
  for (std::size_t t = static_cast<std::size_t>(condition_on_); t < x.size();
       ++t) {
    double pred = 0.0;
    for (int tau = 1; tau <= k_; ++tau)
      pred += params[static_cast<std::size_t>(tau - 1)] *
              x[t - static_cast<std::size_t>(tau)];
    acc += st::log_normal_pdf(x[t], pred, sd);
  }
  return acc;
}

std::vector<double> ArModel::sample_prior(Rng& rng) const {
  std::vector<double> params(static_cast<std::size_t>(k_ + 1));
  for (int i = 0; i < k_; ++i)
    params[static_cast<std::size_t>(i)] = rng.normal(0.0, hyper_.coef_sd);
  params[static_cast<std::size_t>(k_)] =
      rng.inverse_gamma(hyper_.noise_shape, hyper_.noise_scale);
  return params;
}

ChainState ArModel::within_model_update(const ChainState& state,
                                        std::span<const double> scales,
                                        Rng& rng) const {
  // Random-walk block on the coefficients.
  std::vector<double> proposal(state.params);
  for (int i = 0; i < k_; ++i)
    proposal[static_cast<std::size_t>(i)] +=
        (scales.empty() ? 0.1 : scales[static_cast<std::size_t>(i)]) *
        rng.normal();
  const double prop_ll = log_likelihood(proposal);
  const double prop_lp = log_prior(proposal);
  ChainState next = state;
  const double coin = rng.uniform();
  if (std::isfinite(prop_ll + prop_lp) &&
      std::log(coin) < prop_ll + prop_lp - state.log_target()) {
    next.params = std::move(proposal);
    next.log_likelihood = prop_ll;
    next.log_prior = prop_lp;
  }

  // Conjugate refresh of the noise variance given the coefficients.
  const auto& x = *series_;
  double ss = 0.0;
  long m = 0;
  for (std::size_t t = static_cast<std::size_t>(condition_on_); t < x.size();
       ++t) {
    double pred = 0.0;
    for (int tau = 1; tau <= k_; ++tau)
      pred += next.params[static_cast<std::size_t>(tau - 1)] *
              x[t - static_cast<std::size_t>(tau)];
    const double r = x[t] - pred;
    ss += r * r;
    ++m;
  }
  next.params[static_cast<std::size_t>(k_)] = rng.inverse_gamma(
      hyper_.noise_shape + 0.5 * static_cast<double>(m),
      hyper_.noise_scale + 0.5 * ss);
  next.log_likelihood = log_likelihood(next.params);
  next.log_prior = log_prior(next.params);
  return next;
}

Problem make_ar_problem(std::shared_ptr<const std::vector<double>> series,
                        const ArHyperParams& hyper) {
  Problem problem;
  problem.space = std::make_unique<ModelSpace>();
  for (int k = 1; k <= hyper.k_max; ++k)
    problem.space->add_model(
        std::make_unique<ArModel>(k, series, hyper, hyper.k_max),
        1.0 / static_cast<double>(hyper.k_max));
  problem.space->use_nearest_neighbour_jumps();

  problem.moves = std::make_unique<MoveSet>();
  for (int k = 1; k < hyper.k_max; ++k) {
    const double q_up = problem.space->jump_prob(k - 1, k);
    const double q_down = problem.space->jump_prob(k, k - 1);
    const double scale = hyper.coef_sd * q_up / q_down;
    problem.moves->add(std::make_unique<GaussianInsertMove>(
        "ar-birth-" + std::to_string(k), k - 1, k, k + 1, k,
        std::vector<double>{0.0}, std::vector<double>{scale}));
  }
  return problem;
}

}  // namespace rjmcmc::models
