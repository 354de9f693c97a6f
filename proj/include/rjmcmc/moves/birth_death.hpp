#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rjmcmc/models/mixture.hpp"
#include "rjmcmc/move.hpp"

namespace rjmcmc::moves {

using models::MixtureComponent;
using models::MixtureHyperParams;
using models::MixtureModel;

// Birth of a prior-drawn component: existing weights are rescaled by
// (1 - w_new) so they stay on the simplex. Returns the sorted insertion
// position and the log proposal density / log Jacobian terms that enter
// the acceptance ratio.
struct BirthResult {
  std::vector<double> params;
  int position = 0;
  double log_proposal = 0.0;  // density of (w_new, mean_new, var_new)
  double log_jacobian = 0.0;  // (k - 1) log(1 - w_new)
};
BirthResult birth_component(std::span<const double> params,
                            const MixtureHyperParams& hyper,
                            const MixtureComponent& drawn);

// Removal of component j with weight renormalisation; the exact inverse
// of birth_component at the same slot.
struct DeathResult {
  std::vector<double> params;
  MixtureComponent removed;
  double log_proposal = 0.0;
  double log_jacobian = 0.0;
};
DeathResult death_component(std::span<const double> params, int j,
                            const MixtureHyperParams& hyper);

// Allocation-aware selection: a death may only target a component with
// zero allocated observations; empty optional means the move is aborted
// (counts as a rejection).
std::optional<int> pick_empty_component(std::span<const int> allocation_counts,
                                        Rng& rng);

// Between-model move k -> k+1 by prior birth, reversed by deleting a
// uniformly chosen component. Operating on the marginal (allocation-free)
// state, every component is eligible for death; the likelihood ratio does
// the gatekeeping that explicit empty-component bookkeeping would.
class MixtureBirthDeathMove : public JumpMove {
public:
  MixtureBirthDeathMove(int from_index, int to_index, const MixtureModel& low,
                        const MixtureModel& high);

  std::string name() const override;
  int from_index() const override { return from_; }
  int to_index() const override { return to_; }
  int u_dim() const override { return 3; }
  int u_dim_reverse() const override { return 0; }
  // The reverse death picks the component to delete.
  bool deterministic_reverse() const override { return false; }

  bool apply_forward(std::span<const double> theta, const UVec& u,
                     std::vector<double>& theta_out,
                     UVec& u_rev_out) const override;
  bool apply_reverse(std::span<const double> theta, const UVec& u_rev,
                     std::vector<double>& theta_out,
                     UVec& u_out) const override;
  double log_jacobian_forward(std::span<const double> theta,
                              const UVec& u) const override;
  UVec sample_u_forward(std::span<const double> theta_from,
                        Rng& rng) const override;
  UVec sample_u_reverse(std::span<const double> theta_to,
                        Rng& rng) const override;
  double log_u_density_forward(std::span<const double> theta_from,
                               const UVec& u) const override;
  double log_u_density_reverse(std::span<const double> theta_to,
                               const UVec& u_rev) const override;

private:
  int from_ = 0;
  int to_ = 0;
  const MixtureModel* low_ = nullptr;
  const MixtureModel* high_ = nullptr;
};

}  // namespace rjmcmc::moves
