#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/move.hpp"
#include "rjmcmc/problems.hpp"

namespace rjmcmc::models {

struct ChangePointHyperParams {
  double height_shape = 1.0;   // Gamma(shape, rate) prior on step heights
  double height_rate = 1.0;    // defaults to T / n_events
  double poisson_nu = 1.0;     // truncated-Poisson prior on k
  int k_max = 10;
  double position_walk_sd = 0.0;    // 0: use T/20
  double height_log_walk_sd = 0.4;

  static ChangePointHyperParams defaults_for(
      std::span<const double> event_times, double horizon);
};

// Inhomogeneous Poisson process on [0, T] whose rate is a step function
// with k change-points. params: [kappa_1 < ... < kappa_k, h_0 .. h_k],
// dimension 2k+1, label k. Positions carry the even-order-statistics
// prior of 2k+1 uniforms; heights are Gamma.
class ChangePointModel : public ModelDefinition {
public:
  ChangePointModel(int k, std::shared_ptr<const std::vector<double>> events,
                   double horizon, ChangePointHyperParams hyper);

  int dimension() const override { return 2 * k_ + 1; }
  int label() const override { return k_; }
  std::string name() const override {
    return "changepoint-" + std::to_string(k_);
  }
  double log_prior(std::span<const double> params) const override;
  double log_likelihood(std::span<const double> params) const override;
  std::vector<double> sample_prior(Rng& rng) const override;

  // Positions: reflected random walk inside the neighbouring-position
  // interval. Heights: log-scale random walk. One sweep per call.
  ChainState within_model_update(const ChainState& state,
                                 std::span<const double> scales,
                                 Rng& rng) const override;

  double horizon() const { return horizon_; }
  const ChangePointHyperParams& hyper() const { return hyper_; }

private:
  int k_ = 0;
  std::shared_ptr<const std::vector<double>> events_;  // sorted
  double horizon_ = 1.0;
  ChangePointHyperParams hyper_;
};

// Birth at a uniform position with a height split preserving the
// integrated rate; death merges the two segments back. The reverse death
// picks the change-point to delete uniformly.
class ChangePointBirthDeathMove : public JumpMove {
public:
  ChangePointBirthDeathMove(int from_index, int to_index,
                            const ChangePointModel& low,
                            const ChangePointModel& high);

  std::string name() const override;
  int from_index() const override { return from_; }
  int to_index() const override { return to_; }
  int u_dim() const override { return 2; }
  int u_dim_reverse() const override { return 0; }
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
  const ChangePointModel* low_ = nullptr;
  const ChangePointModel* high_ = nullptr;
};

// Model space over k = 0..k_max with truncated-Poisson model prior.
Problem make_changepoint_problem(
    std::shared_ptr<const std::vector<double>> events, double horizon,
    const ChangePointHyperParams& hyper);

}  // namespace rjmcmc::models
