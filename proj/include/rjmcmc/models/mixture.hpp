#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rjmcmc/model.hpp"

namespace rjmcmc::models {

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double variance = 1.0;
};

struct MixtureHyperParams {
  double delta = 1.0;   // symmetric Dirichlet weight
  double xi = 0.0;      // prior mean of component means
  double kappa = 1.0;   // prior precision of component means
  double alpha = 2.0;   // inverse-gamma shape of component variances
  double beta = 0.02;   // inverse-gamma scale of component variances
  int k_max = 30;

  // Scale-free defaults: xi = data midrange, kappa = 1/range^2,
  // beta = 0.02 * range^2. Empty data keeps the unit-scale values.
  static MixtureHyperParams defaults_for(std::span<const double> data);
};

// params layout for k components: [w_1..w_k, mu_1..mu_k, var_1..var_k],
// means ascending (the ordering constraint is part of the state space).
std::vector<MixtureComponent> unpack_components(std::span<const double> params);
std::vector<double> pack_components(std::span<const MixtureComponent> comps);

// Univariate Gaussian mixture with k components: Dirichlet(delta) weights,
// N(xi, 1/kappa) means, IG(alpha, beta) variances, means kept ordered.
// The chain targets the marginal likelihood (allocations integrated out);
// allocation-conditioned quantities are exposed for calibration and Gibbs.
class MixtureModel : public ModelDefinition {
public:
  MixtureModel(int k, std::shared_ptr<const std::vector<double>> data,
               MixtureHyperParams hyper);

  int dimension() const override { return 3 * k_; }
  int label() const override { return k_; }
  std::string name() const override {
    return "mixture-" + std::to_string(k_);
  }
  double log_prior(std::span<const double> params) const override;
  double log_likelihood(std::span<const double> params) const override;
  std::vector<double> sample_prior(Rng& rng) const override;

  // Gibbs sweep: allocations, then weights, means and variances from
  // their exact conditionals; components re-sorted by mean.
  ChainState within_model_update(const ChainState& state,
                                 std::span<const double> scales,
                                 Rng& rng) const override;

  // Likelihood conditioned on an explicit allocation vector.
  double log_likelihood_given_alloc(std::span<const double> params,
                                    std::span<const int> alloc) const;
  // P(z_i = j | theta, x_i) for one observation.
  std::vector<double> allocation_probabilities(std::span<const double> params,
                                               double x) const;
  // Exact-conditional resample of every allocation.
  std::vector<int> gibbs_allocations(std::span<const double> params,
                                     Rng& rng) const;
  // Expected allocation counts sum_i P(z_i = j | theta, x_i).
  std::vector<double> soft_counts(std::span<const double> params) const;

  const MixtureHyperParams& hyper() const { return hyper_; }
  const std::vector<double>& data() const { return *data_; }

private:
  int k_ = 1;
  std::shared_ptr<const std::vector<double>> data_;
  MixtureHyperParams hyper_;
};

// Model space over k = 1..k_max mixtures with uniform model prior and
// nearest-neighbour jumps.
std::unique_ptr<ModelSpace> make_mixture_space(
    std::shared_ptr<const std::vector<double>> data,
    const MixtureHyperParams& hyper, int k_max);

}  // namespace rjmcmc::models
