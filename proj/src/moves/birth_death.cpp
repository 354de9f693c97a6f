#include "rjmcmc/moves/birth_death.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::moves {

namespace st = rjmcmc::stats;
using models::pack_components;
using models::unpack_components;

namespace {

double log_birth_density(const MixtureHyperParams& hyper, int k,
                         const MixtureComponent& c) {
  // Prior draw: weight from the Dirichlet one-coordinate marginal over
  // k+1 components, mean and variance from their priors.
  return st::log_beta_pdf(c.weight, hyper.delta,
                          hyper.delta * static_cast<double>(k)) +
         st::log_normal_pdf(c.mean, hyper.xi, 1.0 / std::sqrt(hyper.kappa)) +
         st::log_inverse_gamma_pdf(c.variance, hyper.alpha, hyper.beta);
}

}  // namespace

BirthResult birth_component(std::span<const double> params,
                            const MixtureHyperParams& hyper,
                            const MixtureComponent& drawn) {
  auto comps = unpack_components(params);
  const int k = static_cast<int>(comps.size());
  if (!(drawn.weight > 0.0 && drawn.weight < 1.0) || !(drawn.variance > 0.0))
    throw std::domain_error("birth_component: drawn component out of range");
  for (auto& c : comps) c.weight *= 1.0 - drawn.weight;
  const auto at = std::find_if(comps.begin(), comps.end(), [&](const auto& c) {
    return c.mean > drawn.mean;
  });
  BirthResult result;
  result.position = static_cast<int>(at - comps.begin());
  comps.insert(at, drawn);
  result.params = pack_components(comps);
  result.log_proposal = log_birth_density(hyper, k, drawn);
  result.log_jacobian =
      static_cast<double>(k - 1) * std::log1p(-drawn.weight);
  return result;
}

DeathResult death_component(std::span<const double> params, int j,
                            const MixtureHyperParams& hyper) {
  auto comps = unpack_components(params);
  if (j < 0 || j >= static_cast<int>(comps.size()))
    throw std::invalid_argument("death_component: index out of range");
  if (comps.size() < 2)
    throw std::invalid_argument("death_component: cannot empty the mixture");
  DeathResult result;
  result.removed = comps[static_cast<std::size_t>(j)];
  comps.erase(comps.begin() + j);
  const double keep = 1.0 - result.removed.weight;
  for (auto& c : comps) c.weight /= keep;
  result.params = pack_components(comps);
  const int k = static_cast<int>(comps.size());
  result.log_proposal = log_birth_density(hyper, k, result.removed);
  result.log_jacobian =
      static_cast<double>(k - 1) * std::log1p(-result.removed.weight);
  return result;
}

std::optional<int> pick_empty_component(std::span<const int> allocation_counts,
                                        Rng& rng) {
  std::vector<int> empty;
  for (std::size_t j = 0; j < allocation_counts.size(); ++j)
    if (allocation_counts[j] == 0) empty.push_back(static_cast<int>(j));
  if (empty.empty()) return std::nullopt;
  return empty[rng.uniform_int(empty.size())];
}

MixtureBirthDeathMove::MixtureBirthDeathMove(int from_index, int to_index,
                                             const MixtureModel& low,
                                             const MixtureModel& high)
    : from_(from_index), to_(to_index), low_(&low), high_(&high) {
  if (high.label() != low.label() + 1)
    throw std::invalid_argument(
        "MixtureBirthDeathMove: models must differ by one component");
}

std::string MixtureBirthDeathMove::name() const {
  return "birth-death-" + std::to_string(low_->label());
}

bool MixtureBirthDeathMove::apply_forward(std::span<const double> theta,
                                          const UVec& u,
                                          std::vector<double>& theta_out,
                                          UVec& u_rev_out) const {
  if (!(u.values[0] > 0.0 && u.values[0] < 1.0) || !(u.values[2] > 0.0))
    return false;
  const MixtureComponent drawn{u.values[0], u.values[1], u.values[2]};
  BirthResult birth = birth_component(theta, low_->hyper(), drawn);
  theta_out = std::move(birth.params);
  u_rev_out = UVec{};
  u_rev_out.choice = birth.position;
  return true;
}

bool MixtureBirthDeathMove::apply_reverse(std::span<const double> theta,
                                          const UVec& u_rev,
                                          std::vector<double>& theta_out,
                                          UVec& u_out) const {
  const auto comps = unpack_components(theta);
  if (u_rev.choice < 0 || u_rev.choice >= static_cast<int>(comps.size()))
    return false;
  DeathResult death = death_component(theta, u_rev.choice, low_->hyper());
  theta_out = std::move(death.params);
  u_out = UVec{};
  u_out.values = {death.removed.weight, death.removed.mean,
                  death.removed.variance};
  return true;
}

double MixtureBirthDeathMove::log_jacobian_forward(std::span<const double>,
                                                   const UVec& u) const {
  const int k = low_->label();
  return static_cast<double>(k - 1) * std::log1p(-u.values[0]);
}

UVec MixtureBirthDeathMove::sample_u_forward(std::span<const double>,
                                             Rng& rng) const {
  const auto& hp = low_->hyper();
  UVec u;
  u.values = {rng.beta(hp.delta, hp.delta * static_cast<double>(low_->label())),
              rng.normal(hp.xi, 1.0 / std::sqrt(hp.kappa)),
              rng.inverse_gamma(hp.alpha, hp.beta)};
  return u;
}

UVec MixtureBirthDeathMove::sample_u_reverse(std::span<const double>,
                                             Rng& rng) const {
  UVec u;
  u.choice = static_cast<int>(
      rng.uniform_int(static_cast<std::uint64_t>(high_->label())));
  return u;
}

double MixtureBirthDeathMove::log_u_density_forward(std::span<const double>,
                                                    const UVec& u) const {
  const MixtureComponent drawn{u.values[0], u.values[1], u.values[2]};
  if (!(drawn.weight > 0.0 && drawn.weight < 1.0) || !(drawn.variance > 0.0))
    return st::kNegInf;
  return log_birth_density(low_->hyper(), low_->label(), drawn);
}

double MixtureBirthDeathMove::log_u_density_reverse(std::span<const double>,
                                                    const UVec& u_rev) const {
  const int k1 = high_->label();
  if (u_rev.choice < 0 || u_rev.choice >= k1) return st::kNegInf;
  return -std::log(static_cast<double>(k1));
}

}  // namespace rjmcmc::moves
