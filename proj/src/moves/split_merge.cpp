#include "rjmcmc/moves/split_merge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::moves {

namespace st = rjmcmc::stats;
using models::pack_components;
using models::unpack_components;

SplitResult split_component(const MixtureComponent& parent, double u1,
                            double u2, double u3) {
  if (!(u1 > 0.0 && u1 < 1.0) || !(u2 > 0.0 && u2 < 1.0) ||
      !(u3 > 0.0 && u3 < 1.0))
    throw std::domain_error(
        "split_component: u on the open-interval boundary (degenerate split); "
        "use split_centering_limit for centering-point evaluation");
  const double w = parent.weight;
  const double m = parent.mean;
  const double v = parent.variance;
  const double s = std::sqrt(v);
  SplitResult result;
  result.first.weight = w * u1;
  result.second.weight = w * (1.0 - u1);
  result.first.mean =
      m - u2 * s * std::sqrt(result.second.weight / result.first.weight);
  result.second.mean =
      m + u2 * s * std::sqrt(result.first.weight / result.second.weight);
  result.first.variance = u3 * (1.0 - u2 * u2) * v * w / result.first.weight;
  result.second.variance =
      (1.0 - u3) * (1.0 - u2 * u2) * v * w / result.second.weight;
  return result;
}

SplitResult split_centering_limit(const MixtureComponent& parent, double u1) {
  // Along u2 = 0, u3 = u1 both children keep the parent's location and
  // scale; only the weight splits.
  SplitResult result;
  result.first = parent;
  result.second = parent;
  result.first.weight = parent.weight * u1;
  result.second.weight = parent.weight * (1.0 - u1);
  return result;
}

MergeResult merge_components(const MixtureComponent& a,
                             const MixtureComponent& b) {
  const MixtureComponent& lo = a.mean <= b.mean ? a : b;
  const MixtureComponent& hi = a.mean <= b.mean ? b : a;
  MergeResult result;
  const double w = lo.weight + hi.weight;
  const double u1 = lo.weight / w;
  const double m = (lo.weight * lo.mean + hi.weight * hi.mean) / w;
  // Stable form of the second-moment identity: every term nonnegative.
  double v = u1 * lo.variance + (1.0 - u1) * hi.variance +
             u1 * (1.0 - u1) * (hi.mean - lo.mean) * (hi.mean - lo.mean);
  if (!(v > 0.0)) {
    v = 1e-12;
    result.variance_clamped = true;
  }
  result.merged = {w, m, v};
  const double u2 =
      (m - lo.mean) / (std::sqrt(v) * std::sqrt((1.0 - u1) / u1));
  const double u3 = lo.variance * u1 / ((1.0 - u2 * u2) * v);
  result.u = {u1, u2, u3};
  return result;
}

double split_log_jacobian(const MixtureComponent& parent, double u1, double u2,
                          double u3) {
  (void)u3;  // the determinant is u3-free
  return std::log(parent.weight) + 1.5 * std::log(parent.variance) +
         std::log1p(-u2 * u2) -
         1.5 * (std::log(u1) + std::log1p(-u1));
}

MixtureSplitMergeMove::MixtureSplitMergeMove(int from_index, int to_index,
                                             const MixtureModel& low,
                                             const MixtureModel& high,
                                             bool calibrate_u1)
    : from_(from_index),
      to_(to_index),
      low_(&low),
      high_(&high),
      calibrate_u1_(calibrate_u1) {
  if (high.label() != low.label() + 1)
    throw std::invalid_argument(
        "MixtureSplitMergeMove: models must differ by one component");
}

std::string MixtureSplitMergeMove::name() const {
  return "split-merge-" + std::to_string(low_->label());
}

std::array<std::array<double, 2>, 3> MixtureSplitMergeMove::beta_params(
    std::span<const double> theta_from, int split_index) const {
  std::array<std::array<double, 2>, 3> params = {{{2.0, 2.0}, {2.0, 2.0}, {1.0, 1.0}}};
  if (calibrate_u1_) {
    const double delta = low_->hyper().delta;
    const auto counts = low_->soft_counts(theta_from);
    params[0] = {delta + 2.0 * counts[static_cast<std::size_t>(split_index)],
                 delta};
  }
  return params;
}

bool MixtureSplitMergeMove::apply_forward(std::span<const double> theta,
                                          const UVec& u,
                                          std::vector<double>& theta_out,
                                          UVec& u_rev_out) const {
  auto comps = unpack_components(theta);
  const int k = static_cast<int>(comps.size());
  if (u.choice < 0 || u.choice >= k) return false;
  const MixtureComponent parent = comps[static_cast<std::size_t>(u.choice)];
  SplitResult split;
  try {
    split = split_component(parent, u.values[0], u.values[1], u.values[2]);
  } catch (const std::domain_error&) {
    return false;
  }
  comps.erase(comps.begin() + u.choice);
  comps.insert(comps.begin() + u.choice, {split.first, split.second});
  // The children must come out adjacent in mean order, otherwise the
  // reverse merge could never recover this state.
  for (int j = 1; j <= k; ++j)
    if (comps[static_cast<std::size_t>(j)].mean <
        comps[static_cast<std::size_t>(j - 1)].mean)
      return false;
  theta_out = pack_components(comps);
  u_rev_out = UVec{};
  u_rev_out.choice = u.choice;  // index of the adjacent pair
  return true;
}

bool MixtureSplitMergeMove::apply_reverse(std::span<const double> theta,
                                          const UVec& u_rev,
                                          std::vector<double>& theta_out,
                                          UVec& u_out) const {
  auto comps = unpack_components(theta);
  const int pairs = static_cast<int>(comps.size()) - 1;
  if (u_rev.choice < 0 || u_rev.choice >= pairs) return false;
  const auto p = static_cast<std::size_t>(u_rev.choice);
  MergeResult merged = merge_components(comps[p], comps[p + 1]);
  if (merged.variance_clamped) clamp_count_.fetch_add(1);
  comps.erase(comps.begin() + u_rev.choice);
  comps[p] = merged.merged;
  theta_out = pack_components(comps);
  u_out = UVec{};
  u_out.choice = u_rev.choice;
  u_out.values = {merged.u[0], merged.u[1], merged.u[2]};
  return true;
}

double MixtureSplitMergeMove::log_jacobian_forward(
    std::span<const double> theta, const UVec& u) const {
  const auto comps = unpack_components(theta);
  const auto& parent = comps.at(static_cast<std::size_t>(u.choice));
  return split_log_jacobian(parent, u.values[0], u.values[1], u.values[2]);
}

UVec MixtureSplitMergeMove::sample_u_forward(std::span<const double> theta_from,
                                             Rng& rng) const {
  const int k = low_->label();
  UVec u;
  u.choice = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
  const auto bp = beta_params(theta_from, u.choice);
  u.values = {rng.beta(bp[0][0], bp[0][1]), rng.beta(bp[1][0], bp[1][1]),
              rng.beta(bp[2][0], bp[2][1])};
  return u;
}

UVec MixtureSplitMergeMove::sample_u_reverse(std::span<const double>,
                                             Rng& rng) const {
  // k adjacent pairs among the k+1 components of the higher model.
  UVec u;
  u.choice = static_cast<int>(
      rng.uniform_int(static_cast<std::uint64_t>(high_->label() - 1)));
  return u;
}

double MixtureSplitMergeMove::log_u_density_forward(
    std::span<const double> theta_from, const UVec& u) const {
  const int k = low_->label();
  if (u.choice < 0 || u.choice >= k) return st::kNegInf;
  const auto bp = beta_params(theta_from, u.choice);
  double acc = -std::log(static_cast<double>(k));
  for (int i = 0; i < 3; ++i)
    acc += st::log_beta_pdf(u.values[static_cast<std::size_t>(i)],
                            bp[static_cast<std::size_t>(i)][0],
                            bp[static_cast<std::size_t>(i)][1]);
  return acc;
}

double MixtureSplitMergeMove::log_u_density_reverse(std::span<const double>,
                                                    const UVec& u_rev) const {
  const int pairs = high_->label() - 1;
  if (u_rev.choice < 0 || u_rev.choice >= pairs) return st::kNegInf;
  return -std::log(static_cast<double>(pairs));
}

}  // namespace rjmcmc::moves
