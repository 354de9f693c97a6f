#include "rjmcmc/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rjmcmc::stats {

double log_sum_exp(std::span<const double> values) {
  double max_v = kNegInf;
  for (double v : values) max_v = std::max(max_v, v);
  if (!std::isfinite(max_v)) return max_v;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - max_v);
  return max_v + std::log(acc);
}

double log_normal_pdf(double x, double mean, double sd) {
  if (!(sd > 0.0)) return kNegInf;
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

double log_gamma_pdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(x) - rate * x;
}

double log_inverse_gamma_pdf(double x, double shape, double scale) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(scale) - std::lgamma(shape) -
         (shape + 1.0) * std::log(x) - scale / x;
}

double log_beta_pdf(double x, double a, double b) {
  if (!(x > 0.0) || !(x < 1.0)) return kNegInf;
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) +
         std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
}

double log_dirichlet_sym_pdf(std::span<const double> w, double delta) {
  const std::size_t k = w.size();
  if (k == 0) return kNegInf;
  double acc = std::lgamma(delta * static_cast<double>(k)) -
               static_cast<double>(k) * std::lgamma(delta);
  double total = 0.0;
  for (double wi : w) {
    if (!(wi > 0.0)) return kNegInf;
    acc += (delta - 1.0) * std::log(wi);
    total += wi;
  }
  if (std::abs(total - 1.0) > 1e-8) return kNegInf;
  return acc;
}

double log_poisson_pmf(long k, double lambda) {
  if (k < 0 || !(lambda > 0.0)) return kNegInf;
  const double kd = static_cast<double>(k);
  return kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0);
}

double log_truncated_poisson_pmf(long k, double nu, long k_max) {
  if (k < 0 || k > k_max) return kNegInf;
  std::vector<double> terms(static_cast<std::size_t>(k_max) + 1);
  for (long j = 0; j <= k_max; ++j)
    terms[static_cast<std::size_t>(j)] = log_poisson_pmf(j, nu);
  return log_poisson_pmf(k, nu) - log_sum_exp(terms);
}

double chi_squared_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) return 1.0;
  const double ne = static_cast<double>(n) * static_cast<double>(m) /
                    static_cast<double>(n + m);
  const double root = std::sqrt(ne);
  return kolmogorov_sf((root + 0.12 + 0.11 / root) * d);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double variance_population(std::span<const double> values) {
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return acc / static_cast<double>(values.size());
}

double variance_sample(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("variance_sample: need at least 2 values");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return acc / static_cast<double>(values.size() - 1);
}

double batch_means_se(std::span<const double> values, int batches) {
  if (batches < 2) throw std::invalid_argument("batch_means_se: batches < 2");
  const std::size_t n = values.size();
  if (n < static_cast<std::size_t>(2 * batches)) {
    // Too short to batch: fall back to the iid standard error.
    return std::sqrt(variance_population(values) /
                     static_cast<double>(std::max<std::size_t>(n, 1)));
  }
  const std::size_t len = n / static_cast<std::size_t>(batches);
  std::vector<double> bm(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    const auto begin = static_cast<std::size_t>(b) * len;
    bm[static_cast<std::size_t>(b)] =
        mean(values.subspan(begin, len));
  }
  return std::sqrt(variance_sample(bm) / static_cast<double>(batches));
}

}  // namespace rjmcmc::stats
