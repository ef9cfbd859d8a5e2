#ifndef SIGTESTSIM_STATS_HPP
#define SIGTESTSIM_STATS_HPP

#include <cstdint>
#include <vector>

namespace sigtestsim::stats {

double log_beta(double a, double b);

// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// Inverse of I_x(a, b) in x for fixed (a, b).
double reg_inc_beta_inv(double a, double b, double p);

double normal_cdf(double x);
double normal_quantile(double p);

// Student t cdf with df degrees of freedom.
double t_cdf(double x, double df);

// P(X >= s) for X ~ Binomial(n, 0.5). Exact for n <= 50.
double binom_upper_tail_half(std::int64_t s, std::int64_t n);

double mean(const std::vector<double>& x);
double sample_sd(const std::vector<double>& x);

// Kendall tau-a of paired samples (O(n^2); test / diagnostic use).
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Nodes and weights of n-point Gauss-Legendre quadrature on [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Quadrature& unit_quadrature();  // 128-point, cached

}  // namespace sigtestsim::stats

#endif  // SIGTESTSIM_STATS_HPP
