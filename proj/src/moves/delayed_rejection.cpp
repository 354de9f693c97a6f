#include "rjmcmc/moves/delayed_rejection.hpp"

#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::moves {

TwoStageMove::TwoStageMove(const JumpMove& base, double shrink)
    : base_(&base), shrink_(shrink) {
  if (!base.deterministic_reverse())
    throw std::invalid_argument(
        "TwoStageMove: base move must have a deterministic reverse (" +
        base.name() + ")");
  if (base.u_dim() <= 0)
    throw std::invalid_argument("TwoStageMove: base move draws no randomness");
  if (!(shrink > 0.0))
    throw std::invalid_argument("TwoStageMove: shrink must be > 0");
}

bool TwoStageMove::apply_forward(std::span<const double> theta, const UVec& u,
                                 std::vector<double>& theta_out,
                                 UVec& u_rev_out) const {
  const int d = base_->u_dim();
  UVec shrunk;
  shrunk.values.assign(u.values.begin() + d, u.values.end());
  for (double& v : shrunk.values) v *= shrink_;
  UVec ignored;
  if (!base_->apply_forward(theta, shrunk, theta_out, ignored)) return false;
  u_rev_out = UVec{};
  u_rev_out.values.assign(u.values.begin(), u.values.begin() + d);
  return true;
}

bool TwoStageMove::apply_reverse(std::span<const double> theta,
                                 const UVec& u_rev,
                                 std::vector<double>& theta_out,
                                 UVec& u_out) const {
  UVec recovered;
  if (!base_->apply_reverse(theta, UVec{}, theta_out, recovered)) return false;
  u_out = UVec{};
  u_out.values = u_rev.values;  // the passed-through u1
  for (double v : recovered.values) u_out.values.push_back(v / shrink_);
  return true;
}

double TwoStageMove::log_jacobian_forward(std::span<const double> theta,
                                          const UVec& u) const {
  const int d = base_->u_dim();
  UVec shrunk;
  shrunk.values.assign(u.values.begin() + d, u.values.end());
  for (double& v : shrunk.values) v *= shrink_;
  return base_->log_jacobian_forward(theta, shrunk) +
         static_cast<double>(d) * std::log(shrink_);
}

UVec TwoStageMove::sample_u_forward(std::span<const double> theta_from,
                                    Rng& rng) const {
  UVec u1 = base_->sample_u_forward(theta_from, rng);
  UVec u2 = base_->sample_u_forward(theta_from, rng);
  UVec u;
  u.values = u1.values;
  u.values.insert(u.values.end(), u2.values.begin(), u2.values.end());
  return u;
}

UVec TwoStageMove::sample_u_reverse(std::span<const double> theta_to,
                                    Rng& rng) const {
  // The fresh first-stage vector of the mirrored path, drawn from the
  // same family; the base proposal may depend on the departure state, so
  // project down first.
  std::vector<double> theta_from;
  UVec ignored;
  if (!base_->apply_reverse(theta_to, UVec{}, theta_from, ignored))
    throw std::logic_error("TwoStageMove: reverse projection failed");
  return base_->sample_u_forward(theta_from, rng);
}

double TwoStageMove::log_u_density_forward(std::span<const double> theta_from,
                                           const UVec& u) const {
  const int d = base_->u_dim();
  UVec u1, u2;
  u1.values.assign(u.values.begin(), u.values.begin() + d);
  u2.values.assign(u.values.begin() + d, u.values.end());
  return base_->log_u_density_forward(theta_from, u1) +
         base_->log_u_density_forward(theta_from, u2);
}

double TwoStageMove::log_u_density_reverse(std::span<const double> theta_to,
                                           const UVec& u_rev) const {
  std::vector<double> theta_from;
  UVec ignored;
  if (!base_->apply_reverse(theta_to, UVec{}, theta_from, ignored))
    return stats::kNegInf;
  return base_->log_u_density_forward(theta_from, u_rev);
}

namespace {

double capped_alpha(double log_a) {
  if (std::isnan(log_a)) return 0.0;
  return std::min(1.0, std::exp(log_a));
}

}  // namespace

DelayedRejectionResult delayed_rejection_step(const ChainState& state,
                                              const ModelSpace& space,
                                              const JumpMove& stage1,
                                              const TwoStageMove& stage2,
                                              bool forward_orientation,
                                              double log_extra, Rng& rng) {
  DelayedRejectionResult result;
  result.state = state;
  const int target =
      forward_orientation ? stage1.to_index() : stage1.from_index();

  AcceptanceRecord rec1;
  rec1.from_index = state.model_index;
  rec1.to_index = target;

  if (forward_orientation) {
    // Stage 1: the plain up-proposal.
    UVec u1 = stage1.sample_u_forward(state.params, rng);
    std::vector<double> y_params;
    UVec u_rev_y;
    const bool ok1 =
        stage1.apply_forward(state.params, u1, y_params, u_rev_y);
    const double coin1 = rng.uniform();
    ChainState y;
    double alpha1_xy = 0.0;
    if (ok1) {
      y = space.make_state(target, std::move(y_params));
      alpha1_xy = capped_alpha(
          acceptance_log_ratio(state, y, space, stage1, u1, u_rev_y, log_extra));
    }
    rec1.alpha = alpha1_xy;
    rec1.accepted = coin1 < alpha1_xy;
    result.records.push_back(rec1);
    if (rec1.accepted) {
      result.state = std::move(y);
      return result;
    }

    // Stage 2: fresh shrunken proposal z = g1(x, shrink * u2).
    UVec u2 = stage1.sample_u_forward(state.params, rng);
    UVec u_cat;
    u_cat.values = u1.values;
    u_cat.values.insert(u_cat.values.end(), u2.values.begin(), u2.values.end());
    std::vector<double> z_params;
    UVec u_rev2;
    const bool ok2 = stage2.apply_forward(state.params, u_cat, z_params, u_rev2);
    const double coin2 = rng.uniform();
    AcceptanceRecord rec2 = rec1;
    rec2.alpha = 0.0;
    rec2.accepted = false;
    if (ok2) {
      ChainState z = space.make_state(target, std::move(z_params));
      double log_a2 = acceptance_log_ratio(state, z, space, stage2, u_cat,
                                           u_rev2, log_extra);
      // Companion factors: the rejection probabilities of the hypothetical
      // first stage on the reverse path and of the actual first stage.
      double alpha1_zw = 0.0;
      {
        std::vector<double> w_params;
        UVec u_w;
        if (stage1.apply_reverse(z.params, UVec{}, w_params, u_w)) {
          ChainState w = space.make_state(state.model_index,
                                          std::move(w_params));
          alpha1_zw = capped_alpha(acceptance_log_ratio(
              z, w, space, stage1, UVec{}, u_w, -log_extra));
        }
      }
      log_a2 += std::log1p(-alpha1_zw) - std::log1p(-alpha1_xy);
      rec2.alpha = capped_alpha(log_a2);
      rec2.accepted = coin2 < rec2.alpha;
      if (rec2.accepted) result.state = std::move(z);
    }
    result.records.push_back(rec2);
    return result;
  }

  // Down orientation: both stages propose the deterministic projection,
  // stage 2 with the corrected acceptance probability.
  std::vector<double> x_params;
  UVec u_x;
  const bool ok1 = stage1.apply_reverse(state.params, UVec{}, x_params, u_x);
  const double coin1 = rng.uniform();
  if (!ok1) {
    rec1.alpha = 0.0;
    rec1.accepted = false;
    result.records.push_back(rec1);
    return result;
  }
  ChainState x = space.make_state(target, std::move(x_params));
  const double alpha1_zx = capped_alpha(
      acceptance_log_ratio(state, x, space, stage1, UVec{}, u_x, log_extra));
  rec1.alpha = alpha1_zx;
  rec1.accepted = coin1 < alpha1_zx;
  result.records.push_back(rec1);
  if (rec1.accepted) {
    result.state = std::move(x);
    return result;
  }

  // Fresh u1 of the mirrored up-path; the second-stage down proposal is
  // the same projected state, accepted with the two-stage ratio.
  UVec u1_fresh = stage2.sample_u_reverse(state.params, rng);
  std::vector<double> x2_params;
  UVec u_cat_rec;
  const bool ok2 =
      stage2.apply_reverse(state.params, u1_fresh, x2_params, u_cat_rec);
  const double coin2 = rng.uniform();
  AcceptanceRecord rec2 = rec1;
  rec2.alpha = 0.0;
  rec2.accepted = false;
  if (ok2) {
    double log_a2 = acceptance_log_ratio(state, x, space, stage2, u1_fresh,
                                         u_cat_rec, log_extra);
    double alpha1_xy = 0.0;
    {
      std::vector<double> y_params;
      UVec u_rev_y;
      if (stage1.apply_forward(x.params, u1_fresh, y_params, u_rev_y)) {
        ChainState y =
            space.make_state(state.model_index, std::move(y_params));
        alpha1_xy = capped_alpha(acceptance_log_ratio(
            x, y, space, stage1, u1_fresh, u_rev_y, -log_extra));
      }
    }
    log_a2 += std::log1p(-alpha1_xy) - std::log1p(-alpha1_zx);
    rec2.alpha = capped_alpha(log_a2);
    rec2.accepted = coin2 < rec2.alpha;
    if (rec2.accepted) result.state = std::move(x);
  }
  result.records.push_back(rec2);
  return result;
}

BetweenKernel make_delayed_rejection_kernel(double shrink) {
  return [shrink](const ChainState& state, const ModelSpace& space,
                  const MoveSet& moves, Rng& rng) -> BetweenStepResult {
    const auto selection = select_between_move(state, space, moves, rng);
    if (!selection) return {state, {}};
    const JumpMove& base = *selection->binding.move;
    TwoStageMove stage2(base, shrink);
    DelayedRejectionResult result = delayed_rejection_step(
        state, space, base, stage2, selection->binding.forward,
        selection->log_extra, rng);
    return {std::move(result.state), std::move(result.records)};
  };
}

}  // namespace rjmcmc::moves
