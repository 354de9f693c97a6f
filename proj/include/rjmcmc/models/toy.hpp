#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/move.hpp"

namespace rjmcmc::models {

// Two-model conjugate pair used as the built-in "toy" model kind.
//   M1: x_i ~ N(0, sigma^2), no free parameters.
//   M2: x_i ~ N(theta, sigma^2), theta ~ N(0, tau^2).
// Both marginal likelihoods are available in closed form, which makes the
// pair a reference problem for Bayes-factor estimators.
class FixedMeanNormalModel : public ModelDefinition {
public:
  FixedMeanNormalModel(std::vector<double> data, double sigma);

  int dimension() const override { return 0; }
  int label() const override { return 1; }
  std::string name() const override { return "toy-fixed-mean"; }
  double log_prior(std::span<const double>) const override { return 0.0; }
  double log_likelihood(std::span<const double>) const override {
    return log_likelihood_;
  }
  std::vector<double> sample_prior(Rng&) const override { return {}; }

private:
  double log_likelihood_ = 0.0;
};

class FreeMeanNormalModel : public ModelDefinition {
public:
  FreeMeanNormalModel(std::vector<double> data, double sigma, double tau);

  int dimension() const override { return 1; }
  int label() const override { return 2; }
  std::string name() const override { return "toy-free-mean"; }
  double log_prior(std::span<const double> params) const override;
  double log_likelihood(std::span<const double> params) const override;
  std::vector<double> sample_prior(Rng& rng) const override;

  double tau() const { return tau_; }

private:
  std::vector<double> data_;
  double sigma_ = 1.0;
  double tau_ = 1.0;
};

// Birth move that appends Gaussian-proposed coordinates:
//   theta' = (theta[0:insert_at), loc + scale * u, theta[insert_at:)),
// u ~ N(0, I). The reverse move is deterministic. Serves the toy pair and
// the AR order-increment move.
class GaussianInsertMove : public JumpMove {
public:
  GaussianInsertMove(std::string name, int from_index, int to_index,
                     int from_dim, int insert_at, std::vector<double> loc,
                     std::vector<double> scale);

  std::string name() const override { return name_; }
  int from_index() const override { return from_; }
  int to_index() const override { return to_; }
  int u_dim() const override { return static_cast<int>(loc_.size()); }
  int u_dim_reverse() const override { return 0; }

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
  std::string name_;
  int from_ = 0;
  int to_ = 0;
  int from_dim_ = 0;
  int insert_at_ = 0;
  std::vector<double> loc_;
  std::vector<double> scale_;
};

// Assembled two-model toy problem: space (uniform model prior unless
// given) and the single birth/death move with proposal scale `tau`.
struct ToyProblem {
  std::unique_ptr<ModelSpace> space;
  std::unique_ptr<MoveSet> moves;
};
ToyProblem make_toy_problem(std::vector<double> data, double sigma,
                            double tau, std::vector<double> model_prior = {});

}  // namespace rjmcmc::models
