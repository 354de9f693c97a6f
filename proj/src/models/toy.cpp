#include "rjmcmc/models/toy.hpp"

#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::models {

FixedMeanNormalModel::FixedMeanNormalModel(std::vector<double> data,
                                           double sigma) {
  for (double x : data)
    log_likelihood_ += stats::log_normal_pdf(x, 0.0, sigma);
}

FreeMeanNormalModel::FreeMeanNormalModel(std::vector<double> data,
                                         double sigma, double tau)
    : data_(std::move(data)), sigma_(sigma), tau_(tau) {
  if (!(sigma > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("FreeMeanNormalModel: sigma, tau must be > 0");
}

double FreeMeanNormalModel::log_prior(std::span<const double> params) const {
  return stats::log_normal_pdf(params[0], 0.0, tau_);
}

double FreeMeanNormalModel::log_likelihood(
    std::span<const double> params) const {
  double acc = 0.0;
  for (double x : data_)
    acc += stats::log_normal_pdf(x, params[0], sigma_);
  return acc;
}

std::vector<double> FreeMeanNormalModel::sample_prior(Rng& rng) const {
  return {rng.normal(0.0, tau_)};
}

GaussianInsertMove::GaussianInsertMove(std::string name, int from_index,
                                       int to_index, int from_dim,
                                       int insert_at, std::vector<double> loc,
                                       std::vector<double> scale)
    : name_(std::move(name)),
      from_(from_index),
      to_(to_index),
      from_dim_(from_dim),
      insert_at_(insert_at),
      loc_(std::move(loc)),
      scale_(std::move(scale)) {
  if (loc_.size() != scale_.size())
    throw std::invalid_argument("GaussianInsertMove: loc/scale size mismatch");
  if (insert_at_ < 0 || insert_at_ > from_dim_)
    throw std::invalid_argument("GaussianInsertMove: bad insert position");
  for (double s : scale_)
    if (!(s > 0.0))
      throw std::invalid_argument("GaussianInsertMove: scale must be > 0");
}

bool GaussianInsertMove::apply_forward(std::span<const double> theta,
                                       const UVec& u,
                                       std::vector<double>& theta_out,
                                       UVec& u_rev_out) const {
  theta_out.assign(theta.begin(), theta.begin() + insert_at_);
  for (std::size_t i = 0; i < loc_.size(); ++i)
    theta_out.push_back(loc_[i] + scale_[i] * u.values[i]);
  theta_out.insert(theta_out.end(), theta.begin() + insert_at_, theta.end());
  u_rev_out = UVec{};
  return true;
}

bool GaussianInsertMove::apply_reverse(std::span<const double> theta,
                                       const UVec&,
                                       std::vector<double>& theta_out,
                                       UVec& u_out) const {
  const int m = u_dim();
  theta_out.assign(theta.begin(), theta.begin() + insert_at_);
  theta_out.insert(theta_out.end(), theta.begin() + insert_at_ + m,
                   theta.end());
  u_out = UVec{};
  u_out.values.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const std::size_t j = static_cast<std::size_t>(insert_at_ + i);
    u_out.values[static_cast<std::size_t>(i)] =
        (theta[j] - loc_[static_cast<std::size_t>(i)]) /
        scale_[static_cast<std::size_t>(i)];
  }
  return true;
}

double GaussianInsertMove::log_jacobian_forward(std::span<const double>,
                                                const UVec&) const {
  double acc = 0.0;
  for (double s : scale_) acc += std::log(s);
  return acc;
}

UVec GaussianInsertMove::sample_u_forward(std::span<const double>,
                                          Rng& rng) const {
  UVec u;
  u.values.resize(loc_.size());
  for (double& v : u.values) v = rng.normal();
  return u;
}

UVec GaussianInsertMove::sample_u_reverse(std::span<const double>,
                                          Rng&) const {
  return {};
}

double GaussianInsertMove::log_u_density_forward(std::span<const double>,
                                                 const UVec& u) const {
  double acc = 0.0;
  for (double v : u.values) acc += stats::log_normal_pdf(v, 0.0, 1.0);
  return acc;
}

double GaussianInsertMove::log_u_density_reverse(std::span<const double>,
                                                 const UVec&) const {
  return 0.0;
}

ToyProblem make_toy_problem(std::vector<double> data, double sigma,
                            double tau, std::vector<double> model_prior) {
  if (model_prior.empty()) model_prior = {0.5, 0.5};
  ToyProblem problem;
  problem.space = std::make_unique<ModelSpace>();
  problem.space->add_model(
      std::make_unique<FixedMeanNormalModel>(data, sigma), model_prior.at(0));
  problem.space->add_model(
      std::make_unique<FreeMeanNormalModel>(std::move(data), sigma, tau),
      model_prior.at(1));
  problem.space->use_nearest_neighbour_jumps();
  problem.moves = std::make_unique<MoveSet>();
  problem.moves->add(std::make_unique<GaussianInsertMove>(
      "toy-birth", 0, 1, 0, 0, std::vector<double>{0.0},
      std::vector<double>{tau}));
  return problem;
}

}  // namespace rjmcmc::models
