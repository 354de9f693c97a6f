#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rjmcmc/move.hpp"
#include "rjmcmc/sampler.hpp"

namespace rjmcmc::moves {

// First and second moments of one model's target: covariance = root root^T.
struct ModelMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd root;
};

// Moment-matched generic jump: standardise the departing coordinates with
// the source moments, rotate, pad with u ~ N(0, I) or truncate, and map
// through the destination moments:
//   n' > n:  theta' = mu' + B' R (B^-1(theta - mu) (+) u)
//   n' = n:  theta' = mu' + B' R  B^-1(theta - mu)
//   n' < n:  theta' = mu' + B' [R B^-1(theta - mu)]_{1..n'}, rest -> u_rev
// The Jacobian is |det B'| / |det B| in every case. With exactly Gaussian
// targets matching the supplied moments, symmetric jump probabilities and
// equal model probabilities, every proposal is accepted.
class AutoRjMove : public JumpMove {
public:
  AutoRjMove(int from_index, int to_index, ModelMoments from_moments,
             ModelMoments to_moments,
             Eigen::MatrixXd rotation = Eigen::MatrixXd());

  std::string name() const override { return "auto-rj"; }
  int from_index() const override { return from_; }
  int to_index() const override { return to_; }
  int u_dim() const override { return u_dim_; }
  int u_dim_reverse() const override { return u_dim_rev_; }

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
  int n_from_ = 0;
  int n_to_ = 0;
  int u_dim_ = 0;
  int u_dim_rev_ = 0;
  ModelMoments from_m_;
  ModelMoments to_m_;
  Eigen::MatrixXd rotation_;
  Eigen::MatrixXd from_inv_;
  Eigen::MatrixXd to_inv_;
  double log_jac_ = 0.0;  // log|det B'| - log|det B|
};

// Pilot-run moment estimation: fixed-model random-walk chain, sample mean
// and a lower-triangular root of the sample covariance.
ModelMoments estimate_moments_pilot(const ModelSpace& space, int model_index,
                                    long iterations, long burn_in,
                                    double scale, Rng& rng);

}  // namespace rjmcmc::moves
