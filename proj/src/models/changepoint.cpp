#include "rjmcmc/models/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::models {

namespace st = rjmcmc::stats;

namespace {

struct StepFunction {
  std::span<const double> positions;  // size k
  std::span<const double> heights;    // size k+1
};

StepFunction unpack(std::span<const double> params) {
  const std::size_t k = (params.size() - 1) / 2;
  return {params.subspan(0, k), params.subspan(k, k + 1)};
}

}  // namespace

ChangePointHyperParams ChangePointHyperParams::defaults_for(
    std::span<const double> event_times, double horizon) {
  ChangePointHyperParams hp;
  if (!event_times.empty())
    hp.height_rate = horizon / static_cast<double>(event_times.size());
  hp.position_walk_sd = horizon / 20.0;
  return hp;
}

ChangePointModel::ChangePointModel(
    int k, std::shared_ptr<const std::vector<double>> events, double horizon,
    ChangePointHyperParams hyper)
    : k_(k), events_(std::move(events)), horizon_(horizon), hyper_(hyper) {
  if (k_ < 0) throw std::invalid_argument("ChangePointModel: k must be >= 0");
  if (!(horizon_ > 0.0))
    throw std::invalid_argument("ChangePointModel: horizon must be > 0");
  if (!events_) throw std::invalid_argument("ChangePointModel: null events");
  for (double t : *events_)
    if (!(t >= 0.0 && t <= horizon_))
      throw std::invalid_argument(
          "ChangePointModel: event time outside [0, horizon]");
  if (!std::is_sorted(events_->begin(), events_->end()))
    throw std::invalid_argument("ChangePointModel: event times must be sorted");
  if (hyper_.position_walk_sd <= 0.0) hyper_.position_walk_sd = horizon_ / 20.0;
}

double ChangePointModel::log_prior(std::span<const double> params) const {
  const auto step = unpack(params);
  double acc = 0.0;
  // Even-numbered order statistics of 2k+1 uniforms on [0, T].
  acc += std::lgamma(2.0 * k_ + 2.0);  // (2k+1)!
  acc -= (2.0 * k_ + 1.0) * std::log(horizon_);
  double prev = 0.0;
  for (double pos : step.positions) {
    if (!(pos > prev && pos < horizon_)) return st::kNegInf;
    acc += std::log(pos - prev);
    prev = pos;
  }
  acc += std::log(horizon_ - prev);
  for (double h : step.heights) {
    if (!(h > 0.0)) return st::kNegInf;
    acc += st::log_gamma_pdf(h, hyper_.height_shape, hyper_.height_rate);
  }
  return acc;
}

double ChangePointModel::log_likelihood(std::span<const double> params) const {
  const auto step = unpack(params);
  double prev = 0.0;
  for (double pos : step.positions) {
    if (!(pos > prev && pos < horizon_)) return st::kNegInf;
    prev = pos;
  }
  for (double h : step.heights)
    if (!(h > 0.0)) return st::kNegInf;

  double acc = 0.0;
  // Integrated rate.
  prev = 0.0;
  for (std::size_t j = 0; j < step.heights.size(); ++j) {
    const double end =
        j < step.positions.size() ? step.positions[j] : horizon_;
    acc -= step.heights[j] * (end - prev);
    prev = end;
  }
  // Event terms: events are sorted, walk segments in one pass.
  std::size_t seg = 0;
  for (double t : *events_) {
    while (seg < step.positions.size() && t >= step.positions[seg]) ++seg;
    acc += std::log(step.heights[seg]);
  }
  return acc;
}

std::vector<double> ChangePointModel::sample_prior(Rng& rng) const {
  std::vector<double> order_stats(static_cast<std::size_t>(2 * k_ + 1));
  for (double& v : order_stats) v = rng.uniform(0.0, horizon_);
  std::sort(order_stats.begin(), order_stats.end());
  std::vector<double> params(static_cast<std::size_t>(2 * k_ + 1));
  for (int j = 0; j < k_; ++j)
    params[static_cast<std::size_t>(j)] =
        order_stats[static_cast<std::size_t>(2 * j + 1)];
  for (int j = 0; j <= k_; ++j)
    params[static_cast<std::size_t>(k_ + j)] =
        rng.gamma(hyper_.height_shape, hyper_.height_rate);
  return params;
}

ChainState ChangePointModel::within_model_update(const ChainState& state,
                                                 std::span<const double>,
                                                 Rng& rng) const {
  ChainState current = state;
  const std::size_t k = static_cast<std::size_t>(k_);

  // Positions: reflected walk within the neighbouring-position interval.
  for (std::size_t j = 0; j < k; ++j) {
    const double lo = j == 0 ? 0.0 : current.params[j - 1];
    const double hi = j + 1 < k ? current.params[j + 1] : horizon_;
    double pos = current.params[j] + hyper_.position_walk_sd * rng.normal();
    for (int fold = 0; fold < 64 && (pos < lo || pos > hi); ++fold)
      pos = pos < lo ? 2.0 * lo - pos : 2.0 * hi - pos;
    const double coin = rng.uniform();
    if (!(pos > lo && pos < hi)) continue;
    std::vector<double> proposal(current.params);
    proposal[j] = pos;
    const double ll = log_likelihood(proposal);
    const double lp = log_prior(proposal);
    if (std::isfinite(ll + lp) &&
        std::log(coin) < ll + lp - current.log_target()) {
      current.params = std::move(proposal);
      current.log_likelihood = ll;
      current.log_prior = lp;
    }
  }

  // Heights: log-scale walk (Jacobian h'/h enters the ratio).
  for (std::size_t j = k; j < current.params.size(); ++j) {
    const double h = current.params[j];
    const double hp = h * std::exp(hyper_.height_log_walk_sd * rng.normal());
    const double coin = rng.uniform();
    std::vector<double> proposal(current.params);
    proposal[j] = hp;
    const double ll = log_likelihood(proposal);
    const double lp = log_prior(proposal);
    if (std::isfinite(ll + lp) &&
        std::log(coin) <
            ll + lp - current.log_target() + std::log(hp) - std::log(h)) {
      current.params = std::move(proposal);
      current.log_likelihood = ll;
      current.log_prior = lp;
    }
  }
  return current;
}

ChangePointBirthDeathMove::ChangePointBirthDeathMove(
    int from_index, int to_index, const ChangePointModel& low,
    const ChangePointModel& high)
    : from_(from_index), to_(to_index), low_(&low), high_(&high) {
  if (high.label() != low.label() + 1)
    throw std::invalid_argument(
        "ChangePointBirthDeathMove: models must differ by one change-point");
}

std::string ChangePointBirthDeathMove::name() const {
  return "cp-birth-death-" + std::to_string(low_->label());
}

bool ChangePointBirthDeathMove::apply_forward(std::span<const double> theta,
                                              const UVec& u,
                                              std::vector<double>& theta_out,
                                              UVec& u_rev_out) const {
  const int k = low_->label();
  const double horizon = low_->horizon();
  const double pos = u.values[0];
  const double v = u.values[1];
  if (!(pos > 0.0 && pos < horizon) || !(v > 0.0 && v < 1.0)) return false;

  const auto step = unpack(theta);
  // Segment that contains the new position.
  int seg = 0;
  while (seg < k && pos >= step.positions[static_cast<std::size_t>(seg)]) ++seg;
  const double lo = seg == 0 ? 0.0 : step.positions[static_cast<std::size_t>(seg - 1)];
  const double hi =
      seg < k ? step.positions[static_cast<std::size_t>(seg)] : horizon;
  if (!(pos > lo && pos < hi)) return false;  // coincides with a change-point

  const double len1 = pos - lo;
  const double len2 = hi - pos;
  const double len = hi - lo;
  const double h = step.heights[static_cast<std::size_t>(seg)];
  const double r = (1.0 - v) / v;
  const double h1 = len * h / (len1 + len2 * r);
  const double h2 = r * h1;

  theta_out.clear();
  theta_out.reserve(theta.size() + 2);
  for (int j = 0; j < seg; ++j)
    theta_out.push_back(step.positions[static_cast<std::size_t>(j)]);
  theta_out.push_back(pos);
  for (int j = seg; j < k; ++j)
    theta_out.push_back(step.positions[static_cast<std::size_t>(j)]);
  for (int j = 0; j < seg; ++j)
    theta_out.push_back(step.heights[static_cast<std::size_t>(j)]);
  theta_out.push_back(h1);
  theta_out.push_back(h2);
  for (int j = seg + 1; j <= k; ++j)
    theta_out.push_back(step.heights[static_cast<std::size_t>(j)]);

  u_rev_out = UVec{};
  u_rev_out.choice = seg;  // index of the change-point to delete
  return true;
}

bool ChangePointBirthDeathMove::apply_reverse(std::span<const double> theta,
                                              const UVec& u_rev,
                                              std::vector<double>& theta_out,
                                              UVec& u_out) const {
  const int k1 = high_->label();  // change-points in the departing state
  const double horizon = high_->horizon();
  if (u_rev.choice < 0 || u_rev.choice >= k1) return false;
  const auto step = unpack(theta);
  const auto j = static_cast<std::size_t>(u_rev.choice);

  const double pos = step.positions[j];
  const double lo = j == 0 ? 0.0 : step.positions[j - 1];
  const double hi =
      j + 1 < static_cast<std::size_t>(k1) ? step.positions[j + 1] : horizon;
  const double len1 = pos - lo;
  const double len2 = hi - pos;
  const double h1 = step.heights[j];
  const double h2 = step.heights[j + 1];
  const double merged = (len1 * h1 + len2 * h2) / (len1 + len2);

  theta_out.clear();
  theta_out.reserve(theta.size() - 2);
  for (std::size_t i = 0; i < step.positions.size(); ++i)
    if (i != j) theta_out.push_back(step.positions[i]);
  for (std::size_t i = 0; i < step.heights.size(); ++i) {
    if (i == j) {
      theta_out.push_back(merged);
      ++i;  // skip the second half
    } else {
      theta_out.push_back(step.heights[i]);
    }
  }

  u_out = UVec{};
  u_out.values = {pos, h1 / (h1 + h2)};
  return true;
}

double ChangePointBirthDeathMove::log_jacobian_forward(
    std::span<const double> theta, const UVec& u) const {
  // |d(h1, h2)/d(h, v)| = h1^2 / (v^2 h); positions map by identity.
  const int k = low_->label();
  const double horizon = low_->horizon();
  const double pos = u.values[0];
  const double v = u.values[1];
  const auto step = unpack(theta);
  int seg = 0;
  while (seg < k && pos >= step.positions[static_cast<std::size_t>(seg)]) ++seg;
  const double lo = seg == 0 ? 0.0 : step.positions[static_cast<std::size_t>(seg - 1)];
  const double hi =
      seg < k ? step.positions[static_cast<std::size_t>(seg)] : horizon;
  const double len1 = pos - lo;
  const double len2 = hi - pos;
  const double len = hi - lo;
  const double h = step.heights[static_cast<std::size_t>(seg)];
  const double r = (1.0 - v) / v;
  const double h1 = len * h / (len1 + len2 * r);
  return 2.0 * std::log(h1) - 2.0 * std::log(v) - std::log(h);
}

UVec ChangePointBirthDeathMove::sample_u_forward(std::span<const double>,
                                                 Rng& rng) const {
  UVec u;
  u.values = {rng.uniform(0.0, low_->horizon()), rng.uniform()};
  return u;
}

UVec ChangePointBirthDeathMove::sample_u_reverse(std::span<const double>,
                                                 Rng& rng) const {
  UVec u;
  u.choice = static_cast<int>(
      rng.uniform_int(static_cast<std::uint64_t>(high_->label())));
  return u;
}

double ChangePointBirthDeathMove::log_u_density_forward(
    std::span<const double>, const UVec& u) const {
  const double horizon = low_->horizon();
  if (!(u.values[0] > 0.0 && u.values[0] < horizon)) return st::kNegInf;
  if (!(u.values[1] > 0.0 && u.values[1] < 1.0)) return st::kNegInf;
  return -std::log(horizon);  // position U(0,T), v U(0,1)
}

double ChangePointBirthDeathMove::log_u_density_reverse(
    std::span<const double>, const UVec& u_rev) const {
  const int k1 = high_->label();
  if (u_rev.choice < 0 || u_rev.choice >= k1) return st::kNegInf;
  return -std::log(static_cast<double>(k1));
}

Problem make_changepoint_problem(
    std::shared_ptr<const std::vector<double>> events, double horizon,
    const ChangePointHyperParams& hyper) {
  Problem problem;
  problem.space = std::make_unique<ModelSpace>();
  std::vector<double> prior(static_cast<std::size_t>(hyper.k_max) + 1);
  for (int k = 0; k <= hyper.k_max; ++k)
    prior[static_cast<std::size_t>(k)] = std::exp(
        st::log_truncated_poisson_pmf(k, hyper.poisson_nu, hyper.k_max));
  for (int k = 0; k <= hyper.k_max; ++k)
    problem.space->add_model(
        std::make_unique<ChangePointModel>(k, events, horizon, hyper),
        prior[static_cast<std::size_t>(k)]);
  problem.space->use_nearest_neighbour_jumps();

  problem.moves = std::make_unique<MoveSet>();
  for (int k = 0; k < hyper.k_max; ++k) {
    const auto& low =
        static_cast<const ChangePointModel&>(problem.space->model(k));
    const auto& high =
        static_cast<const ChangePointModel&>(problem.space->model(k + 1));
    problem.moves->add(
        std::make_unique<ChangePointBirthDeathMove>(k, k + 1, low, high));
  }
  return problem;
}

}  // namespace rjmcmc::models
