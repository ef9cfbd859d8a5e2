#ifndef SIGTESTSIM_MARGINS_HPP
#define SIGTESTSIM_MARGINS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sigtestsim {

enum class MarginFamily {
  truncated_normal,
  beta,
  beta_binomial,
  discrete_empirical
};

std::string margin_family_name(MarginFamily f);

// Declared support of an effectiveness measure.
struct SupportHint {
  enum class Kind { continuous, discrete, point_set };
  Kind kind = Kind::continuous;
  int k = 0;                    // denominator for Kind::discrete
  std::vector<double> points;   // for Kind::point_set

  static SupportHint continuous();
  static SupportHint discrete(int k);
  static SupportHint point_set(std::vector<double> points);

  // Support for a named measure: ap | ndcg | err -> continuous,
  // p10 -> discrete(10), rr -> {0} + {1/r : r = 1..cutoff}.
  static SupportHint for_measure(const std::string& measure, int rr_cutoff = 100);

  bool contains(double x) const;
  std::vector<double> support_points() const;  // discrete kinds only
};

// A fitted univariate effectiveness-score distribution. Immutable.
class Margin {
 public:
  virtual ~Margin() = default;
  virtual MarginFamily family() const = 0;
  virtual double cdf(double x) const = 0;
  virtual double quantile(double u) const = 0;
  virtual double mean() const = 0;
  virtual bool is_discrete() const = 0;
  virtual double support_lo() const = 0;
  virtual double support_hi() const = 0;
  virtual nlohmann::json to_json() const = 0;

  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;
};

using MarginPtr = std::shared_ptr<const Margin>;

struct FitReport {
  std::vector<std::pair<std::string, double>> candidates;  // (name, loglik)
  std::string selected;
  double loglik = 0.0;
};

MarginPtr make_beta_margin(double alpha, double beta, double exponent = 1.0);
MarginPtr make_truncated_normal_margin(double mu, double sigma,
                                       double exponent = 1.0);
MarginPtr make_beta_binomial_margin(int k, double alpha, double beta,
                                    double tilt = 0.0);
MarginPtr make_discrete_empirical_margin(std::vector<double> points,
                                         std::vector<double> base_probs,
                                         double tilt = 0.0);

std::pair<MarginPtr, FitReport> fit_margin(const std::vector<double>& scores,
                                           const SupportHint& hint);

// Exponent tilt (continuous) or exponential tilt (discrete) so that the
// result's mean is within tol of target. Support is unchanged.
MarginPtr with_target_mean(const MarginPtr& dist, double target,
                           double tol = 1e-5);

MarginPtr margin_from_json(const nlohmann::json& j);

}  // namespace sigtestsim

#endif  // SIGTESTSIM_MARGINS_HPP
