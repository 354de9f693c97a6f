#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rjmcmc/move.hpp"
#include "rjmcmc/sampler.hpp"

namespace rjmcmc::moves {

// Second-stage companion of a base jump with deterministic reverse: the
// fresh draw u2 replaces the rejected u1, shrunk towards the centre,
//   z = g1(x, shrink * u2),
// while u1 passes through so (x, u1, u2) <-> (z, u1) stays a bijection.
// Its Jacobian is therefore |J1(x, shrink u2)| * shrink^d.
class TwoStageMove : public JumpMove {
public:
  TwoStageMove(const JumpMove& base, double shrink);

  std::string name() const override { return "dr2-" + base_->name(); }
  int from_index() const override { return base_->from_index(); }
  int to_index() const override { return base_->to_index(); }
  int u_dim() const override { return 2 * base_->u_dim(); }
  int u_dim_reverse() const override { return base_->u_dim(); }
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

  const JumpMove& base() const { return *base_; }
  double shrink() const { return shrink_; }

private:
  const JumpMove* base_ = nullptr;
  double shrink_ = 0.5;
};

// One delayed-rejection between-model attempt: the plain first-stage
// proposal, and on rejection a second shrunken proposal accepted with the
// two-stage probability
//   alpha2(x,z) = min{1, pi(z) q(k'->k) [1 - alpha1(z,w)]
//                      / (pi(x) q(k->k') [1 - alpha1(x,y)] q2(u2)) |J2|},
// where w is the hypothetical first-stage (deterministic) down-proposal
// from z. Down attempts mirror the structure exactly, so the composite
// kernel satisfies detailed balance. Both stages are recorded as
// between-model attempts.
struct DelayedRejectionResult {
  ChainState state;
  std::vector<AcceptanceRecord> records;
};
DelayedRejectionResult delayed_rejection_step(const ChainState& state,
                                              const ModelSpace& space,
                                              const JumpMove& stage1,
                                              const TwoStageMove& stage2,
                                              bool forward_orientation,
                                              double log_extra, Rng& rng);

// Kernel adapter for run_sampler: applies delayed rejection on every
// between-model attempt. Requires every move to have a deterministic
// reverse.
BetweenKernel make_delayed_rejection_kernel(double shrink);

}  // namespace rjmcmc::moves
