#include "rjmcmc/moves/autorj.hpp"

#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::moves {

namespace {

double log_abs_det(const Eigen::MatrixXd& m) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw std::invalid_argument("AutoRjMove: moment root is not invertible");
  double acc = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    acc += std::log(std::abs(lu.matrixLU()(i, i)));
  return acc;
}

}  // namespace

AutoRjMove::AutoRjMove(int from_index, int to_index, ModelMoments from_moments,
                       ModelMoments to_moments, Eigen::MatrixXd rotation)
    : from_(from_index),
      to_(to_index),
      from_m_(std::move(from_moments)),
      to_m_(std::move(to_moments)),
      rotation_(std::move(rotation)) {
  n_from_ = static_cast<int>(from_m_.mean.size());
  n_to_ = static_cast<int>(to_m_.mean.size());
  u_dim_ = std::max(n_to_ - n_from_, 0);
  u_dim_rev_ = std::max(n_from_ - n_to_, 0);
  const int order = std::max(n_from_, n_to_);
  if (from_m_.root.rows() != n_from_ || from_m_.root.cols() != n_from_ ||
      to_m_.root.rows() != n_to_ || to_m_.root.cols() != n_to_)
    throw std::invalid_argument("AutoRjMove: moment root size mismatch");
  if (rotation_.size() == 0)
    rotation_ = Eigen::MatrixXd::Identity(order, order);
  if (rotation_.rows() != order || rotation_.cols() != order)
    throw std::invalid_argument("AutoRjMove: rotation must have order max(n, n')");
  if ((rotation_.transpose() * rotation_ -
       Eigen::MatrixXd::Identity(order, order))
          .cwiseAbs()
          .maxCoeff() > 1e-8)
    throw std::invalid_argument("AutoRjMove: rotation is not orthogonal");

  Eigen::FullPivLU<Eigen::MatrixXd> lu_from(from_m_.root);
  Eigen::FullPivLU<Eigen::MatrixXd> lu_to(to_m_.root);
  if (!lu_from.isInvertible() || !lu_to.isInvertible())
    throw std::invalid_argument("AutoRjMove: moment root is not invertible");
  from_inv_ = lu_from.inverse();
  to_inv_ = lu_to.inverse();
  log_jac_ = log_abs_det(to_m_.root) - log_abs_det(from_m_.root);
}

bool AutoRjMove::apply_forward(std::span<const double> theta, const UVec& u,
                               std::vector<double>& theta_out,
                               UVec& u_rev_out) const {
  const int order = std::max(n_from_, n_to_);
  Eigen::VectorXd padded(order);
  Eigen::VectorXd centered(n_from_);
  for (int i = 0; i < n_from_; ++i)
    centered(i) = theta[static_cast<std::size_t>(i)] - from_m_.mean(i);
  padded.head(n_from_) = from_inv_ * centered;
  for (int i = 0; i < u_dim_; ++i)
    padded(n_from_ + i) = u.values[static_cast<std::size_t>(i)];

  const Eigen::VectorXd rotated = rotation_ * padded;
  const Eigen::VectorXd mapped =
      to_m_.mean + to_m_.root * rotated.head(n_to_);
  theta_out.assign(mapped.data(), mapped.data() + n_to_);
  u_rev_out = UVec{};
  u_rev_out.values.resize(static_cast<std::size_t>(u_dim_rev_));
  for (int i = 0; i < u_dim_rev_; ++i)
    u_rev_out.values[static_cast<std::size_t>(i)] = rotated(n_to_ + i);
  return true;
}

bool AutoRjMove::apply_reverse(std::span<const double> theta,
                               const UVec& u_rev,
                               std::vector<double>& theta_out,
                               UVec& u_out) const {
  const int order = std::max(n_from_, n_to_);
  Eigen::VectorXd padded(order);
  Eigen::VectorXd centered(n_to_);
  for (int i = 0; i < n_to_; ++i)
    centered(i) = theta[static_cast<std::size_t>(i)] - to_m_.mean(i);
  padded.head(n_to_) = to_inv_ * centered;
  for (int i = 0; i < u_dim_rev_; ++i)
    padded(n_to_ + i) = u_rev.values[static_cast<std::size_t>(i)];

  const Eigen::VectorXd unrotated = rotation_.transpose() * padded;
  const Eigen::VectorXd mapped =
      from_m_.mean + from_m_.root * unrotated.head(n_from_);
  theta_out.assign(mapped.data(), mapped.data() + n_from_);
  u_out = UVec{};
  u_out.values.resize(static_cast<std::size_t>(u_dim_));
  for (int i = 0; i < u_dim_; ++i)
    u_out.values[static_cast<std::size_t>(i)] = unrotated(n_from_ + i);
  return true;
}

double AutoRjMove::log_jacobian_forward(std::span<const double>,
                                        const UVec&) const {
  return log_jac_;
}

UVec AutoRjMove::sample_u_forward(std::span<const double>, Rng& rng) const {
  UVec u;
  u.values.resize(static_cast<std::size_t>(u_dim_));
  for (double& v : u.values) v = rng.normal();
  return u;
}

UVec AutoRjMove::sample_u_reverse(std::span<const double>, Rng& rng) const {
  UVec u;
  u.values.resize(static_cast<std::size_t>(u_dim_rev_));
  for (double& v : u.values) v = rng.normal();
  return u;
}

double AutoRjMove::log_u_density_forward(std::span<const double>,
                                         const UVec& u) const {
  double acc = 0.0;
  for (double v : u.values) acc += stats::log_normal_pdf(v, 0.0, 1.0);
  return acc;
}

double AutoRjMove::log_u_density_reverse(std::span<const double>,
                                         const UVec& u_rev) const {
  double acc = 0.0;
  for (double v : u_rev.values) acc += stats::log_normal_pdf(v, 0.0, 1.0);
  return acc;
}

ModelMoments estimate_moments_pilot(const ModelSpace& space, int model_index,
                                    long iterations, long burn_in,
                                    double scale, Rng& rng) {
  const ModelDefinition& model = space.model(model_index);
  const int dim = model.dimension();
  if (dim == 0)
    return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};

  ChainState state = space.make_state(model_index, model.sample_prior(rng));
  const std::vector<double> scales(static_cast<std::size_t>(dim), scale);
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(static_cast<std::size_t>(iterations - burn_in));
  for (long t = 0; t < iterations; ++t) {
    state = model.within_model_update(state, scales, rng);
    if (t >= burn_in)
      samples.push_back(Eigen::Map<const Eigen::VectorXd>(
          state.params.data(), dim));
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& s : samples) {
    const Eigen::VectorXd d = s - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(samples.size() - 1);

  // Lower-triangular root; jitter the diagonal if the sample covariance
  // is numerically rank-deficient.
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success)
      return {mean, Eigen::MatrixXd(llt.matrixL())};
    cov += (1e-9 * std::pow(10.0, attempt) * cov.trace() / dim) *
           Eigen::MatrixXd::Identity(dim, dim);
  }
  throw std::runtime_error(
      "estimate_moments_pilot: sample covariance is not positive definite");
}

}  // namespace rjmcmc::moves
