#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rjmcmc/model.hpp"
#include "rjmcmc/move.hpp"
#include "rjmcmc/sampler.hpp"

namespace rjmcmc::moves {

// Proposal parameters chosen so the acceptance probability behaves well
// at the point of equal likelihood between current and proposed models.
struct CenteringSolution {
  std::vector<std::pair<std::string, double>> proposal_params;
  std::vector<double> centering_point;
};

class CalibrationError : public std::runtime_error {
public:
  CalibrationError(const std::string& what, std::vector<double> residuals = {})
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

private:
  std::vector<double> residuals_;
};

// A family of moves indexed by one positive scale parameter, a departure
// state, and the u value at which the likelihood contributions of the two
// models coincide.
struct ScaleCalibration {
  std::function<std::unique_ptr<JumpMove>(double scale)> make_move;
  const ModelSpace* space = nullptr;
  ChainState state;
  std::vector<double> centering_u;
};

// Zeroth-order rule: solve A(centering point; scale) = 1 by bisection in
// log scale. Verifies the supplied point really equalises the likelihoods
// (1e-8 relative) and throws CalibrationError when no positive root is
// bracketed in [lo, hi].
CenteringSolution zeroth_order_scale(const ScaleCalibration& ctx,
                                     double lo = 1e-6, double hi = 1e6);

// m-parameter proposal density for a scalar u, calibrated so the first m
// u-derivatives of the log acceptance vanish. The objective receives
// (u, params) and must be the log acceptance profile in u up to
// u-independent terms.
struct DerivativeCalibration {
  std::function<double(double u, std::span<const double> params)> log_accept;
  double evaluation_point = 0.5;
  std::vector<double> initial_params;
};
std::vector<double> nth_order_params(const DerivativeCalibration& ctx,
                                     int order);

// The u1 profile of the split-move log acceptance at the centering point
// (both children keep the parent's location and scale, every observation
// allocated to the first child): params are the Beta(p1, q1) proposal
// parameters, `parent_count` the allocation count of the component being
// split. The closed-form solution is p1 = delta + 2 l, q1 = delta.
std::function<double(double, std::span<const double>)>
mixture_split_u1_objective(double delta, double parent_count);

}  // namespace rjmcmc::moves
