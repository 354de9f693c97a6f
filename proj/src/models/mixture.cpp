#include "rjmcmc/models/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::models {

namespace st = rjmcmc::stats;

MixtureHyperParams MixtureHyperParams::defaults_for(
    std::span<const double> data) {
  MixtureHyperParams hp;
  if (data.empty()) return hp;
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  const double range = std::max(*hi - *lo, 1e-8);
  hp.xi = 0.5 * (*hi + *lo);
  hp.kappa = 1.0 / (range * range);
  hp.alpha = 2.0;
  hp.beta = 0.02 * range * range;
  hp.delta = 1.0;
  return hp;
}

std::vector<MixtureComponent> unpack_components(
    std::span<const double> params) {
  if (params.size() % 3 != 0)
    throw std::invalid_argument("unpack_components: length not divisible by 3");
  const std::size_t k = params.size() / 3;
  std::vector<MixtureComponent> comps(k);
  for (std::size_t j = 0; j < k; ++j) {
    comps[j].weight = params[j];
    comps[j].mean = params[k + j];
    comps[j].variance = params[2 * k + j];
  }
  return comps;
}

std::vector<double> pack_components(std::span<const MixtureComponent> comps) {
  const std::size_t k = comps.size();
  std::vector<double> params(3 * k);
  for (std::size_t j = 0; j < k; ++j) {
    params[j] = comps[j].weight;
    params[k + j] = comps[j].mean;
    params[2 * k + j] = comps[j].variance;
  }
  return params;
}

MixtureModel::MixtureModel(int k,
                           std::shared_ptr<const std::vector<double>> data,
                           MixtureHyperParams hyper)
    : k_(k), data_(std::move(data)), hyper_(hyper) {
  if (k_ < 1) throw std::invalid_argument("MixtureModel: k must be >= 1");
  if (!data_) throw std::invalid_argument("MixtureModel: null data");
}

double MixtureModel::log_prior(std::span<const double> params) const {
  const auto comps = unpack_components(params);
  std::vector<double> w(comps.size());
  double log_factorial = 0.0;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    w[j] = comps[j].weight;
    if (!(comps[j].variance > 0.0)) return st::kNegInf;
    if (j > 0 && comps[j].mean < comps[j - 1].mean) return st::kNegInf;
    log_factorial += std::log(static_cast<double>(j + 1));
  }
  // Ordered representation of the exchangeable prior: k! times the
  // symmetric density, restricted to ascending means.
  double acc = log_factorial + st::log_dirichlet_sym_pdf(w, hyper_.delta);
  for (const auto& c : comps) {
    acc += st::log_normal_pdf(c.mean, hyper_.xi, 1.0 / std::sqrt(hyper_.kappa));
    acc += st::log_inverse_gamma_pdf(c.variance, hyper_.alpha, hyper_.beta);
  }
  return acc;
}

double MixtureModel::log_likelihood(std::span<const double> params) const {
  const auto comps = unpack_components(params);
  std::vector<double> terms(comps.size());
  double acc = 0.0;
  for (double x : *data_) {
    for (std::size_t j = 0; j < comps.size(); ++j)
      terms[j] = std::log(comps[j].weight) +
                 st::log_normal_pdf(x, comps[j].mean,
                                    std::sqrt(comps[j].variance));
    acc += st::log_sum_exp(terms);
  }
  return acc;
}

std::vector<double> MixtureModel::sample_prior(Rng& rng) const {
  std::vector<MixtureComponent> comps(static_cast<std::size_t>(k_));
  std::vector<double> g(static_cast<std::size_t>(k_));
  double total = 0.0;
  for (auto& gj : g) {
    gj = rng.gamma(hyper_.delta, 1.0);
    total += gj;
  }
  for (int j = 0; j < k_; ++j) {
    auto& c = comps[static_cast<std::size_t>(j)];
    c.weight = g[static_cast<std::size_t>(j)] / total;
    c.mean = rng.normal(hyper_.xi, 1.0 / std::sqrt(hyper_.kappa));
    c.variance = rng.inverse_gamma(hyper_.alpha, hyper_.beta);
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.mean < b.mean; });
  return pack_components(comps);
}

double MixtureModel::log_likelihood_given_alloc(
    std::span<const double> params, std::span<const int> alloc) const {
  if (alloc.size() != data_->size())
    throw std::invalid_argument(
        "log_likelihood_given_alloc: allocation length mismatch");
  const auto comps = unpack_components(params);
  double acc = 0.0;
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    const int j = alloc[i];
    if (j < 0 || j >= k_)
      throw std::invalid_argument(
          "log_likelihood_given_alloc: label out of range");
    const auto& c = comps[static_cast<std::size_t>(j)];
    acc += std::log(c.weight) +
           st::log_normal_pdf((*data_)[i], c.mean, std::sqrt(c.variance));
  }
  return acc;
}

std::vector<double> MixtureModel::allocation_probabilities(
    std::span<const double> params, double x) const {
  const auto comps = unpack_components(params);
  std::vector<double> logp(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j)
    logp[j] = std::log(comps[j].weight) +
              st::log_normal_pdf(x, comps[j].mean,
                                 std::sqrt(comps[j].variance));
  const double norm = st::log_sum_exp(logp);
  std::vector<double> probs(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j)
    probs[j] = std::exp(logp[j] - norm);
  return probs;
}

std::vector<int> MixtureModel::gibbs_allocations(std::span<const double> params,
                                                 Rng& rng) const {
  std::vector<int> alloc(data_->size());
  for (std::size_t i = 0; i < data_->size(); ++i) {
    const auto probs = allocation_probabilities(params, (*data_)[i]);
    alloc[i] = rng.categorical(probs);
  }
  return alloc;
}

std::vector<double> MixtureModel::soft_counts(
    std::span<const double> params) const {
  std::vector<double> counts(static_cast<std::size_t>(k_), 0.0);
  for (double x : *data_) {
    const auto probs = allocation_probabilities(params, x);
    for (int j = 0; j < k_; ++j)
      counts[static_cast<std::size_t>(j)] += probs[static_cast<std::size_t>(j)];
  }
  return counts;
}

ChainState MixtureModel::within_model_update(const ChainState& state,
                                             std::span<const double>,
                                             Rng& rng) const {
  auto comps = unpack_components(state.params);
  const std::size_t k = comps.size();
  const auto& x = *data_;

  std::vector<long> counts(k, 0);
  std::vector<double> sums(k, 0.0);
  std::vector<int> alloc;
  if (!x.empty()) {
    alloc = gibbs_allocations(state.params, rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      counts[static_cast<std::size_t>(alloc[i])] += 1;
      sums[static_cast<std::size_t>(alloc[i])] += x[i];
    }
  }

  // w | z ~ Dirichlet(delta + counts)
  double total = 0.0;
  std::vector<double> g(k);
  for (std::size_t j = 0; j < k; ++j) {
    g[j] = rng.gamma(hyper_.delta + static_cast<double>(counts[j]), 1.0);
    total += g[j];
  }
  for (std::size_t j = 0; j < k; ++j) comps[j].weight = g[j] / total;

  // mu_j | z, var_j; then var_j | z, mu_j with the fresh mean.
  for (std::size_t j = 0; j < k; ++j) {
    const double lj = static_cast<double>(counts[j]);
    const double prec = hyper_.kappa + lj / comps[j].variance;
    const double m =
        (hyper_.kappa * hyper_.xi + sums[j] / comps[j].variance) / prec;
    comps[j].mean = rng.normal(m, 1.0 / std::sqrt(prec));
  }
  if (!x.empty()) {
    std::vector<double> ss(k, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto j = static_cast<std::size_t>(alloc[i]);
      const double d = x[i] - comps[j].mean;
      ss[j] += d * d;
    }
    for (std::size_t j = 0; j < k; ++j)
      comps[j].variance =
          rng.inverse_gamma(hyper_.alpha + 0.5 * static_cast<double>(counts[j]),
                            hyper_.beta + 0.5 * ss[j]);
  } else {
    for (std::size_t j = 0; j < k; ++j)
      comps[j].variance = rng.inverse_gamma(hyper_.alpha, hyper_.beta);
  }

  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.mean < b.mean; });

  ChainState next;
  next.model_index = state.model_index;
  next.params = pack_components(comps);
  next.log_likelihood = log_likelihood(next.params);
  next.log_prior = log_prior(next.params);
  return next;
}

std::unique_ptr<ModelSpace> make_mixture_space(
    std::shared_ptr<const std::vector<double>> data,
    const MixtureHyperParams& hyper, int k_max) {
  if (k_max < 1) throw std::invalid_argument("make_mixture_space: k_max < 1");
  auto space = std::make_unique<ModelSpace>();
  for (int k = 1; k <= k_max; ++k)
    space->add_model(std::make_unique<MixtureModel>(k, data, hyper),
                     1.0 / static_cast<double>(k_max));
  space->use_nearest_neighbour_jumps();
  return space;
}

}  // namespace rjmcmc::models
