#pragma once

#include <array>
#include <atomic>
#include <string>
#include <vector>

#include "rjmcmc/models/mixture.hpp"
#include "rjmcmc/move.hpp"

namespace rjmcmc::moves {

using models::MixtureComponent;
using models::MixtureModel;

// Moment-matching split of one component into two:
//   w1 = w u1,                w2 = w (1 - u1)
//   m1 = m - u2 s sqrt(w2/w1), m2 = m + u2 s sqrt(w1/w2)
//   v1 = u3 (1 - u2^2) v w/w1, v2 = (1 - u3)(1 - u2^2) v w/w2
// with s = sqrt(v). Throws std::domain_error when any u sits on the open
// interval boundary (the degenerate split).
struct SplitResult {
  MixtureComponent first;   // lower mean
  MixtureComponent second;  // higher mean
};
SplitResult split_component(const MixtureComponent& parent, double u1,
                            double u2, double u3);

// Limit form of the split at the centering point u1 -> 1, u2 -> 0,
// u3 = u1: both children share the parent's location and scale.
SplitResult split_centering_limit(const MixtureComponent& parent, double u1);

// Inverse mapping: merged component preserving the first three moments
// plus the unique u that split_component needs to reproduce (a, b).
// The lower-mean input plays the first child. A merged variance clamped
// at 1e-12 (floating-point cancellation) is flagged.
struct MergeResult {
  MixtureComponent merged;
  std::array<double, 3> u{};
  bool variance_clamped = false;
};
MergeResult merge_components(const MixtureComponent& a,
                             const MixtureComponent& b);

// log |d(w1,m1,v1,w2,m2,v2) / d(w,m,v,u1,u2,u3)| of the split mapping.
double split_log_jacobian(const MixtureComponent& parent, double u1, double u2,
                          double u3);

// Between-model move k -> k+1 by split, reversed by merging an adjacent
// pair (components adjacent in mean order; a split whose children would
// straddle another component's mean is degenerate and counts as a
// rejection, which keeps the reverse-move accounting exact).
//
// u proposal: u1, u2 ~ Beta(2,2), u3 ~ Beta(1,1) by default. With
// second-order calibration enabled, u1 ~ Beta(delta + 2 l, delta) where l
// is the expected allocation count of the component being split; the
// count is a deterministic function of the state, so forward and reverse
// proposal densities stay consistent.
class MixtureSplitMergeMove : public JumpMove {
public:
  MixtureSplitMergeMove(int from_index, int to_index, const MixtureModel& low,
                        const MixtureModel& high, bool calibrate_u1 = false);

  std::string name() const override;
  int from_index() const override { return from_; }
  int to_index() const override { return to_; }
  int u_dim() const override { return 3; }
  int u_dim_reverse() const override { return 0; }
  // The reverse merge picks an adjacent pair.
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

  long variance_clamp_count() const { return clamp_count_.load(); }

private:
  // Beta parameters for (u1, u2, u3) given the component being split.
  std::array<std::array<double, 2>, 3> beta_params(
      std::span<const double> theta_from, int split_index) const;

  int from_ = 0;
  int to_ = 0;
  const MixtureModel* low_ = nullptr;
  const MixtureModel* high_ = nullptr;
  bool calibrate_u1_ = false;
  mutable std::atomic<long> clamp_count_{0};
};

}  // namespace rjmcmc::moves
