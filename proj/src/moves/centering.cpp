#include "rjmcmc/moves/centering.hpp"

#include <cmath>

#include "rjmcmc/stats.hpp"

namespace rjmcmc::moves {

namespace {

// log A at the centering point for a given proposal scale.
double centering_log_accept(const ScaleCalibration& ctx, double scale) {
  auto move = ctx.make_move(scale);
  UVec u;
  u.values = ctx.centering_u;
  std::vector<double> proposed_params;
  UVec u_rev;
  if (!move->apply_forward(ctx.state.params, u, proposed_params, u_rev))
    throw CalibrationError("zeroth_order_scale: degenerate centering map");
  ChainState proposed =
      ctx.space->make_state(move->to_index(), std::move(proposed_params));
  const double diff =
      std::abs(proposed.log_likelihood - ctx.state.log_likelihood);
  if (diff > 1e-8 * std::max(1.0, std::abs(ctx.state.log_likelihood)))
    throw CalibrationError(
        "zeroth_order_scale: supplied point does not equalise likelihoods",
        {diff});
  return acceptance_log_ratio(ctx.state, proposed, *ctx.space, *move, u, u_rev);
}

// Central finite-difference derivative of the given order (binomial
// stencil), step h.
double fd_derivative_n(const std::function<double(double)>& f, double x,
                       int order, double h) {
  double acc = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= order; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom * f(x + (0.5 * order - i) * h);
    binom *= static_cast<double>(order - i) / static_cast<double>(i + 1);
  }
  return acc / std::pow(h, order);
}

}  // namespace

CenteringSolution zeroth_order_scale(const ScaleCalibration& ctx, double lo,
                                     double hi) {
  if (!ctx.space || !ctx.make_move)
    throw std::invalid_argument("zeroth_order_scale: incomplete context");
  auto f = [&](double log_s) { return centering_log_accept(ctx, std::exp(log_s)); };

  // Bracket a sign change on a log-spaced grid, then bisect.
  const int grid = 96;
  double a = std::log(lo);
  double b = std::log(hi);
  double prev_x = a;
  double prev_f = f(a);
  double bracket_lo = 0.0, bracket_hi = 0.0;
  bool found = prev_f == 0.0;
  if (found) bracket_lo = bracket_hi = a;
  for (int i = 1; i <= grid && !found; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / grid;
    const double fx = f(x);
    if (fx == 0.0 || prev_f * fx < 0.0) {
      bracket_lo = prev_x;
      bracket_hi = x;
      found = true;
    }
    prev_x = x;
    prev_f = fx;
  }
  if (!found)
    throw CalibrationError(
        "zeroth_order_scale: A(scale) = 1 has no root in the search range",
        {prev_f});

  double f_lo = f(bracket_lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (bracket_lo + bracket_hi);
    const double fm = f(mid);
    if (fm == 0.0 || bracket_hi - bracket_lo < 1e-14) {
      bracket_lo = bracket_hi = mid;
      break;
    }
    if (f_lo * fm < 0.0) {
      bracket_hi = mid;
    } else {
      bracket_lo = mid;
      f_lo = fm;
    }
  }
  const double scale = std::exp(0.5 * (bracket_lo + bracket_hi));
  CenteringSolution solution;
  solution.proposal_params = {{"scale", scale}};
  solution.centering_point = ctx.centering_u;
  return solution;
}

std::vector<double> nth_order_params(const DerivativeCalibration& ctx,
                                     int order) {
  if (order < 1)
    throw std::invalid_argument("nth_order_params: order must be >= 1");
  if (static_cast<int>(ctx.initial_params.size()) != order)
    throw std::invalid_argument(
        "nth_order_params: need one initial value per calibrated parameter");

  const double u0 = ctx.evaluation_point;
  auto residuals = [&](const std::vector<double>& params) {
    std::vector<double> r(static_cast<std::size_t>(order));
    auto profile = [&](double u) { return ctx.log_accept(u, params); };
    // Wider steps for higher orders: the h^-n amplification of rounding
    // noise dominates truncation here.
    for (int n = 1; n <= order; ++n) {
      const double h = n == 1 ? 1e-6 : (n == 2 ? 3e-3 : 1e-2);
      r[static_cast<std::size_t>(n - 1)] =
          fd_derivative_n(profile, u0, n, h);
    }
    return r;
  };

  std::vector<double> params = ctx.initial_params;
  for (int iter = 0; iter < 60; ++iter) {
    const auto r = residuals(params);
    double norm = 0.0;
    for (double v : r) norm = std::max(norm, std::abs(v));
    if (norm < 1e-8) return params;

    // Finite-difference Jacobian of the residuals in the parameters.
    const int m = order;
    std::vector<std::vector<double>> jac(
        static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
    for (int j = 0; j < m; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(params[static_cast<std::size_t>(j)]));
      auto perturbed = params;
      perturbed[static_cast<std::size_t>(j)] += h;
      const auto rp = residuals(perturbed);
      for (int i = 0; i < m; ++i)
        jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (rp[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)]) / h;
    }

    // Solve jac * step = r by Gaussian elimination with partial pivoting.
    std::vector<double> rhs = r;
    auto a = jac;
    std::vector<double> step(static_cast<std::size_t>(m), 0.0);
    bool singular = false;
    for (int col = 0; col < m && !singular; ++col) {
      int pivot = col;
      for (int row = col + 1; row < m; ++row)
        if (std::abs(a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]) >
            std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
          pivot = row;
      if (std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]) < 1e-13) {
        singular = true;
        break;
      }
      std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(col)]);
      std::swap(rhs[static_cast<std::size_t>(pivot)], rhs[static_cast<std::size_t>(col)]);
      for (int row = col + 1; row < m; ++row) {
        const double factor = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] /
                              a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int c2 = col; c2 < m; ++c2)
          a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] -=
              factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
        rhs[static_cast<std::size_t>(row)] -= factor * rhs[static_cast<std::size_t>(col)];
      }
    }
    if (singular)
      throw CalibrationError("nth_order_params: singular derivative system", r);
    for (int row = m - 1; row >= 0; --row) {
      double acc = rhs[static_cast<std::size_t>(row)];
      for (int c2 = row + 1; c2 < m; ++c2)
        acc -= a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] *
               step[static_cast<std::size_t>(c2)];
      step[static_cast<std::size_t>(row)] = acc / a[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
    }
    for (int j = 0; j < m; ++j)
      params[static_cast<std::size_t>(j)] -= step[static_cast<std::size_t>(j)];
  }
  throw CalibrationError("nth_order_params: no convergence",
                         residuals(params));
}

std::function<double(double, std::span<const double>)>
mixture_split_u1_objective(double delta, double parent_count) {
  // u1-dependent part of the split acceptance at the centering point:
  // allocation and weight-prior terms for w1 = w u1, w2 = w (1 - u1) with
  // l1 = parent_count, l2 = 0, minus the Beta(p1, q1) proposal density.
  // Location/scale terms are u1-constant there and drop out.
  return [delta, parent_count](double u, std::span<const double> params) {
    return (delta - 1.0 + 2.0 * parent_count) * std::log(u) +
           (delta - 1.0) * std::log1p(-u) -
           stats::log_beta_pdf(u, params[0], params[1]);
  };
}

}  // namespace rjmcmc::moves
