#pragma once

#include <limits>
#include <span>
#include <vector>

namespace rjmcmc::stats {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> values);

// Log densities. All return kNegInf outside the support instead of NaN.
double log_normal_pdf(double x, double mean, double sd);
double log_gamma_pdf(double x, double shape, double rate);
double log_inverse_gamma_pdf(double x, double shape, double scale);
double log_beta_pdf(double x, double a, double b);
// Symmetric Dirichlet(delta) over the full weight vector; density with
// respect to Lebesgue measure on the first size-1 coordinates.
double log_dirichlet_sym_pdf(std::span<const double> w, double delta);
double log_poisson_pmf(long k, double lambda);
// Poisson(nu) truncated to {0, ..., k_max}.
double log_truncated_poisson_pmf(long k, double nu, long k_max);

// Upper tail of the chi-squared distribution with df degrees of freedom.
double chi_squared_sf(double x, double df);
// Kolmogorov asymptotic survival function Q_KS(lambda).
double kolmogorov_sf(double lambda);
// Two-sample Kolmogorov-Smirnov p-value from the asymptotic distribution
// with the small-sample correction of Stephens.
double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m);

// Sample summaries. Population variance (divide by n) unless stated.
double mean(std::span<const double> values);
double variance_population(std::span<const double> values);
double variance_sample(std::span<const double> values);

// Standard error of the mean by non-overlapping batch means.
double batch_means_se(std::span<const double> values, int batches);

}  // namespace rjmcmc::stats
