#include "sigtestsim/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigtestsim/errors.hpp"
#include "sigtestsim/rng.hpp"
#include "sigtestsim/stats.hpp"
#include "optimize.hpp"

namespace sigtestsim {

namespace {

// Composite Gauss-Legendre rule on [0,1]: 4 panels x 128 nodes.
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const CompositeRule& composite_rule() {
  static const CompositeRule rule = [] {
    const auto& q = stats::unit_quadrature();
    constexpr int panels = 4;
    CompositeRule r;
    for (int p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) / panels;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        r.nodes.push_back(lo + q.nodes[i] / panels);
        r.weights.push_back(q.weights[i] / panels);
      }
    }
    return r;
  }();
  return rule;
}

double lchoose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::string margin_family_name(MarginFamily f) {
  switch (f) {
    case MarginFamily::truncated_normal: return "truncated-normal";
    case MarginFamily::beta: return "beta";
    case MarginFamily::beta_binomial: return "beta-binomial";
    case MarginFamily::discrete_empirical: return "discrete-empirical";
  }
  return "?";
}

SupportHint SupportHint::continuous() { return SupportHint{}; }

SupportHint SupportHint::discrete(int k) {
  SupportHint h;
  h.kind = Kind::discrete;
  h.k = k;
  return h;
}

SupportHint SupportHint::point_set(std::vector<double> points) {
  SupportHint h;
  h.kind = Kind::point_set;
  std::sort(points.begin(), points.end());
  h.points = std::move(points);
  return h;
}

SupportHint SupportHint::for_measure(const std::string& measure, int rr_cutoff) {
  if (measure == "ap" || measure == "ndcg" || measure == "err") {
    return continuous();
  }
  if (measure == "p10") return discrete(10);
  if (measure == "rr") {
    std::vector<double> pts;
    pts.push_back(0.0);
    for (int r = 1; r <= rr_cutoff; ++r) pts.push_back(1.0 / r);
    return point_set(std::move(pts));
  }
  throw invalid_configuration_error("unknown measure: " + measure);
}

bool SupportHint::contains(double x) const {
  constexpr double eps = 1e-9;
  switch (kind) {
    case Kind::continuous:
      return x >= -eps && x <= 1.0 + eps;
    case Kind::discrete: {
      if (x < -eps || x > 1.0 + eps) return false;
      const double scaled = x * k;
      return std::fabs(scaled - std::round(scaled)) < 1e-6;
    }
    case Kind::point_set:
      for (double p : points) {
        if (std::fabs(p - x) < eps) return true;
      }
      return false;
  }
  return false;
}

std::vector<double> SupportHint::support_points() const {
  if (kind == Kind::discrete) {
    std::vector<double> pts(k + 1);
    for (int i = 0; i <= k; ++i) pts[i] = static_cast<double>(i) / k;
    return pts;
  }
  if (kind == Kind::point_set) return points;
  throw invalid_argument_error("support_points: continuous support");
}

std::vector<double> Margin::sample(std::size_t n, std::uint64_t seed) const {
  rng_engine rng = make_rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(uniform01(rng));
  return out;
}

// ---------------------------------------------------------------------------
// Continuous margins on [0,1] with a cdf-exponent transform G = F^a.

class ContinuousMargin : public Margin {
 public:
  double cdf(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double f = base_cdf(x);
    return exponent_ == 1.0 ? f : std::pow(f, exponent_);
  }

  double quantile(double u) const override {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw invalid_argument_error("quantile: u outside [0,1]");
    }
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double base_u =
        exponent_ == 1.0 ? u : std::pow(u, 1.0 / exponent_);
    return base_quantile(base_u);
  }

  double mean() const override { return mean_; }
  bool is_discrete() const override { return false; }
  double support_lo() const override { return 0.0; }
  double support_hi() const override { return 1.0; }

  double exponent() const { return exponent_; }

  // Mean of F^a from the cached node cdf values; used for root-finding.
  double mean_for_exponent(double a) const {
    const auto& rule = composite_rule();
    double acc = 0.0;
    for (std::size_t i = 0; i < node_log_cdf_.size(); ++i) {
      const double lf = node_log_cdf_[i];
      if (lf != -HUGE_VAL) acc += rule.weights[i] * std::exp(a * lf);
    }
    return 1.0 - acc;
  }

  virtual double base_cdf(double x) const = 0;
  virtual double base_quantile(double u) const = 0;
  virtual MarginPtr with_exponent(double a) const = 0;

 protected:
  explicit ContinuousMargin(double exponent) : exponent_(exponent) {
    if (!(exponent > 0.0)) {
      throw invalid_argument_error("margin transform exponent must be > 0");
    }
  }

  // Called at the end of derived constructors.
  void finalize() {
    const auto& rule = composite_rule();
    node_log_cdf_.resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double f = base_cdf(rule.nodes[i]);
      node_log_cdf_[i] = f > 0.0 ? std::log(f) : -HUGE_VAL;
    }
    mean_ = mean_for_exponent(exponent_);
  }

  double exponent_;
  double mean_ = 0.0;
  std::vector<double> node_log_cdf_;
};

class BetaMargin final : public ContinuousMargin {
 public:
  BetaMargin(double alpha, double beta, double exponent)
      : ContinuousMargin(exponent), alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0 && beta > 0.0)) {
      throw invalid_argument_error("beta margin: shape parameters must be > 0");
    }
    finalize();
  }

  MarginFamily family() const override { return MarginFamily::beta; }
  double base_cdf(double x) const override {
    return stats::reg_inc_beta(alpha_, beta_, x);
  }
  double base_quantile(double u) const override {
    return stats::reg_inc_beta_inv(alpha_, beta_, u);
  }
  MarginPtr with_exponent(double a) const override {
    return std::make_shared<BetaMargin>(alpha_, beta_, a);
  }
  nlohmann::json to_json() const override {
    return {{"family", "beta"},
            {"params", {alpha_, beta_}},
            {"support", {{"type", "continuous"}, {"lo", 0.0}, {"hi", 1.0}}},
            {"transform_exponent", exponent_}};
  }

 private:
  double alpha_, beta_;
};

class TruncatedNormalMargin final : public ContinuousMargin {
 public:
  TruncatedNormalMargin(double mu, double sigma, double exponent)
      : ContinuousMargin(exponent), mu_(mu), sigma_(sigma) {
    if (!(sigma > 0.0)) {
      throw invalid_argument_error("truncated normal margin: sigma must be > 0");
    }
    cdf_lo_ = stats::normal_cdf((0.0 - mu_) / sigma_);
    const double cdf_hi = stats::normal_cdf((1.0 - mu_) / sigma_);
    z_ = cdf_hi - cdf_lo_;
    if (!(z_ > 0.0)) {
      throw numeric_failure_error("truncated normal margin: empty mass on [0,1]");
    }
    finalize();
  }

  MarginFamily family() const override { return MarginFamily::truncated_normal; }
  double base_cdf(double x) const override {
    return (stats::normal_cdf((x - mu_) / sigma_) - cdf_lo_) / z_;
  }
  double base_quantile(double u) const override {
    const double x =
        mu_ + sigma_ * stats::normal_quantile(cdf_lo_ + u * z_);
    return std::clamp(x, 0.0, 1.0);
  }
  MarginPtr with_exponent(double a) const override {
    return std::make_shared<TruncatedNormalMargin>(mu_, sigma_, a);
  }
  nlohmann::json to_json() const override {
    return {{"family", "truncated-normal"},
            {"params", {mu_, sigma_}},
            {"support", {{"type", "continuous"}, {"lo", 0.0}, {"hi", 1.0}}},
            {"transform_exponent", exponent_}};
  }

 private:
  double mu_, sigma_;
  double cdf_lo_ = 0.0, z_ = 1.0;
};

// ---------------------------------------------------------------------------
// Discrete margins: finite support points with an exponential tilt.

class DiscreteMargin final : public Margin {
 public:
  DiscreteMargin(MarginFamily family, std::vector<double> points,
                 std::vector<double> base_probs, double tilt,
                 int k = 0, double bb_alpha = 0.0, double bb_beta = 0.0)
      : family_(family),
        points_(std::move(points)),
        base_probs_(std::move(base_probs)),
        tilt_(tilt),
        k_(k),
        bb_alpha_(bb_alpha),
        bb_beta_(bb_beta) {
    if (points_.size() != base_probs_.size() || points_.empty()) {
      throw invalid_argument_error("discrete margin: bad point/probability lists");
    }
    probs_ = tilted_probs(points_, base_probs_, tilt_);
    cum_.resize(probs_.size());
    double acc = 0.0;
    mean_ = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      acc += probs_[i];
      cum_[i] = acc;
      mean_ += probs_[i] * points_[i];
    }
    cum_.back() = 1.0;
  }

  static std::vector<double> tilted_probs(const std::vector<double>& points,
                                          const std::vector<double>& base,
                                          double tilt) {
    // Shift by the extreme point so exp never overflows.
    const double ref = tilt > 0.0 ? points.back() : points.front();
    std::vector<double> p(points.size());
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      p[i] = base[i] * std::exp(tilt * (points[i] - ref));
      total += p[i];
    }
    if (!(total > 0.0)) {
      throw numeric_failure_error("discrete margin: tilt underflowed all mass");
    }
    for (double& v : p) v /= total;
    return p;
  }

  MarginFamily family() const override { return family_; }

  double cdf(double x) const override {
    const double eps = 1e-12;
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size() && points_[i] <= x + eps; ++i) {
      acc = cum_[i];
    }
    return acc;
  }

  // Generalized inverse: smallest support point with cdf >= u.
  double quantile(double u) const override {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw invalid_argument_error("quantile: u outside [0,1]");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (cum_[i] >= u) return points_[i];
    }
    return points_.back();
  }

  double mean() const override { return mean_; }
  bool is_discrete() const override { return true; }
  double support_lo() const override { return points_.front(); }
  double support_hi() const override { return points_.back(); }

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& base_probs() const { return base_probs_; }
  double tilt() const { return tilt_; }

  MarginPtr with_tilt(double tilt) const {
    return std::make_shared<DiscreteMargin>(family_, points_, base_probs_,
                                            tilt, k_, bb_alpha_, bb_beta_);
  }

  nlohmann::json to_json() const override {
    if (family_ == MarginFamily::beta_binomial) {
      return {{"family", "beta-binomial"},
              {"params", {bb_alpha_, bb_beta_}},
              {"k", k_},
              {"support", {{"type", "discrete"}, {"k", k_}}},
              {"tilt", tilt_}};
    }
    return {{"family", "discrete-empirical"},
            {"support", {{"type", "points"}, {"points", points_}}},
            {"probs", base_probs_},
            {"tilt", tilt_}};
  }

 private:
  MarginFamily family_;
  std::vector<double> points_;
  std::vector<double> base_probs_;
  double tilt_;
  int k_;
  double bb_alpha_, bb_beta_;
  std::vector<double> probs_;
  std::vector<double> cum_;
  double mean_ = 0.0;
};

// ---------------------------------------------------------------------------

MarginPtr make_beta_margin(double alpha, double beta, double exponent) {
  return std::make_shared<BetaMargin>(alpha, beta, exponent);
}

MarginPtr make_truncated_normal_margin(double mu, double sigma,
                                       double exponent) {
  return std::make_shared<TruncatedNormalMargin>(mu, sigma, exponent);
}

MarginPtr make_beta_binomial_margin(int k, double alpha, double beta,
                                    double tilt) {
  if (k < 1) throw invalid_argument_error("beta-binomial margin: k must be >= 1");
  if (!(alpha > 0.0 && beta > 0.0)) {
    throw invalid_argument_error("beta-binomial margin: shapes must be > 0");
  }
  std::vector<double> points(k + 1), probs(k + 1);
  const double lb = stats::log_beta(alpha, beta);
  for (int x = 0; x <= k; ++x) {
    points[x] = static_cast<double>(x) / k;
    probs[x] = std::exp(lchoose(k, x) +
                        stats::log_beta(x + alpha, k - x + beta) - lb);
  }
  return std::make_shared<DiscreteMargin>(MarginFamily::beta_binomial,
                                          std::move(points), std::move(probs),
                                          tilt, k, alpha, beta);
}

MarginPtr make_discrete_empirical_margin(std::vector<double> points,
                                         std::vector<double> base_probs,
                                         double tilt) {
  return std::make_shared<DiscreteMargin>(MarginFamily::discrete_empirical,
                                          std::move(points),
                                          std::move(base_probs), tilt);
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

constexpr double kClampEps = 1e-6;

double beta_loglik(const std::vector<double>& x, double alpha, double beta) {
  double acc = -static_cast<double>(x.size()) * stats::log_beta(alpha, beta);
  for (double v : x) {
    acc += (alpha - 1.0) * std::log(v) + (beta - 1.0) * std::log1p(-v);
  }
  return acc;
}

double tn_loglik(const std::vector<double>& x, double mu, double sigma) {
  const double z = stats::normal_cdf((1.0 - mu) / sigma) -
                   stats::normal_cdf((0.0 - mu) / sigma);
  if (!(z > 0.0)) return -HUGE_VAL;
  double acc = -static_cast<double>(x.size()) *
               (std::log(z) + std::log(sigma) + 0.5 * std::log(2.0 * M_PI));
  for (double v : x) {
    const double s = (v - mu) / sigma;
    acc -= 0.5 * s * s;
  }
  return acc;
}

std::pair<MarginPtr, double> fit_beta(const std::vector<double>& scores) {
  std::vector<double> x = scores;
  for (double& v : x) v = std::clamp(v, kClampEps, 1.0 - kClampEps);
  const double m = stats::mean(x);
  const double sd = stats::sample_sd(x);
  const double v = sd * sd;
  double common = m * (1.0 - m) / std::max(v, 1e-12) - 1.0;
  common = std::clamp(common, 0.01, 1e6);
  const double a0 = std::clamp(m * common, 1e-3, 1e6);
  const double b0 = std::clamp((1.0 - m) * common, 1e-3, 1e6);

  auto obj = [&](double la, double lb) {
    const double a = std::exp(la), b = std::exp(lb);
    if (a < 1e-6 || a > 1e8 || b < 1e-6 || b > 1e8) return -HUGE_VAL;
    return beta_loglik(x, a, b);
  };
  const auto best =
      detail::nelder_mead_max_2d(obj, {std::log(a0), std::log(b0)});
  const double a = std::exp(best[0]), b = std::exp(best[1]);
  return {make_beta_margin(a, b), beta_loglik(x, a, b)};
}

std::pair<MarginPtr, double> fit_truncated_normal(
    const std::vector<double>& scores) {
  std::vector<double> x = scores;
  for (double& v : x) v = std::clamp(v, kClampEps, 1.0 - kClampEps);
  const double m = stats::mean(x);
  const double sd = std::max(stats::sample_sd(x), 1e-4);

  auto obj = [&](double mu, double ls) {
    const double sigma = std::exp(ls);
    if (sigma < 1e-6 || sigma > 1e3 || mu < -5.0 || mu > 6.0) return -HUGE_VAL;
    return tn_loglik(x, mu, sigma);
  };
  const auto best = detail::nelder_mead_max_2d(obj, {m, std::log(sd)}, 0.25);
  const double mu = best[0], sigma = std::exp(best[1]);
  return {make_truncated_normal_margin(mu, sigma), tn_loglik(x, mu, sigma)};
}

double bb_loglik(const std::vector<int>& counts, int k, double alpha,
                 double beta) {
  const double lb = stats::log_beta(alpha, beta);
  double acc = 0.0;
  for (int c : counts) {
    acc += lchoose(k, c) + stats::log_beta(c + alpha, k - c + beta) - lb;
  }
  return acc;
}

std::pair<MarginPtr, double> fit_beta_binomial(const std::vector<double>& scores,
                                               int k) {
  std::vector<int> counts;
  counts.reserve(scores.size());
  for (double s : scores) {
    counts.push_back(static_cast<int>(std::lround(s * k)));
  }
  const double m1 =
      stats::mean(scores);  // mean proportion
  double conc = 2.0;
  {
    const double v = stats::sample_sd(scores) * stats::sample_sd(scores);
    const double denom = m1 * (1.0 - m1);
    if (denom > 1e-9 && v > 1e-12) {
      const double w = v * k / denom - 1.0;
      if (w > 1e-9 && k > 1) {
        conc = std::clamp((k - 1.0) / w - 1.0, 0.05, 1e5);
      } else {
        conc = 1e4;  // near-binomial
      }
    }
  }
  const double a0 = std::clamp(m1 * conc, 1e-3, 1e6);
  const double b0 = std::clamp((1.0 - m1) * conc, 1e-3, 1e6);
  auto obj = [&](double la, double lb) {
    const double a = std::exp(la), b = std::exp(lb);
    if (a < 1e-6 || a > 1e8 || b < 1e-6 || b > 1e8) return -HUGE_VAL;
    return bb_loglik(counts, k, a, b);
  };
  const auto best =
      detail::nelder_mead_max_2d(obj, {std::log(a0), std::log(b0)});
  const double a = std::exp(best[0]), b = std::exp(best[1]);
  return {make_beta_binomial_margin(k, a, b), bb_loglik(counts, k, a, b)};
}

// Add-lambda smoothed empirical distribution over the given support points.
std::pair<MarginPtr, double> fit_discrete_empirical(
    const std::vector<double>& scores, const std::vector<double>& points) {
  constexpr double kSmooth = 0.5;
  std::vector<double> counts(points.size(), 0.0);
  for (double s : scores) {
    std::size_t best = 0;
    double best_d = HUGE_VAL;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = std::fabs(points[i] - s);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    counts[best] += 1.0;
  }
  const double total =
      static_cast<double>(scores.size()) + kSmooth * points.size();
  std::vector<double> probs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    probs[i] = (counts[i] + kSmooth) / total;
  }
  double loglik = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (counts[i] > 0.0) loglik += counts[i] * std::log(probs[i]);
  }
  return {make_discrete_empirical_margin(points, std::move(probs)), loglik};
}

}  // namespace

std::pair<MarginPtr, FitReport> fit_margin(const std::vector<double>& scores,
                                           const SupportHint& hint) {
  if (scores.size() < 10) {
    throw insufficient_sample_error("fit_margin: need at least 10 observations");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!hint.contains(scores[i])) {
      throw invalid_data_error("fit_margin: score " + std::to_string(scores[i]) +
                               " at index " + std::to_string(i) +
                               " outside declared support");
    }
  }
  const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
  if (*mn == *mx) {
    throw degenerate_sample_error("fit_margin: constant sample");
  }

  std::vector<std::pair<std::string, std::pair<MarginPtr, double>>> fits;
  switch (hint.kind) {
    case SupportHint::Kind::continuous:
      fits.emplace_back("truncated-normal", fit_truncated_normal(scores));
      fits.emplace_back("beta", fit_beta(scores));
      break;
    case SupportHint::Kind::discrete:
      fits.emplace_back("beta-binomial", fit_beta_binomial(scores, hint.k));
      fits.emplace_back("discrete-empirical",
                        fit_discrete_empirical(scores, hint.support_points()));
      break;
    case SupportHint::Kind::point_set:
      fits.emplace_back("discrete-empirical",
                        fit_discrete_empirical(scores, hint.support_points()));
      break;
  }

  FitReport report;
  std::size_t best = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    report.candidates.emplace_back(fits[i].first, fits[i].second.second);
    if (fits[i].second.second > fits[best].second.second) best = i;
  }
  report.selected = fits[best].first;
  report.loglik = fits[best].second.second;
  return {fits[best].second.first, report};
}

// ---------------------------------------------------------------------------
// Mean transform

namespace {

constexpr int kMaxRootIter = 200;

MarginPtr tilt_continuous(const ContinuousMargin& m, double target, double tol) {
  auto mean_at = [&](double a) { return m.mean_for_exponent(a); };
  double a = m.exponent();
  if (std::fabs(mean_at(a) - target) <= tol) return m.with_exponent(a);

  // mean is increasing in the exponent; expand a geometric bracket.
  double lo = a, hi = a;
  if (mean_at(a) < target) {
    while (mean_at(hi) < target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e14) {
        throw numeric_failure_error("with_target_mean: bracket expansion failed");
      }
    }
  } else {
    while (mean_at(lo) > target) {
      hi = lo;
      lo /= 2.0;
      if (lo < 1e-14) {
        throw numeric_failure_error("with_target_mean: bracket expansion failed");
      }
    }
  }
  for (int it = 0; it < kMaxRootIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double mm = mean_at(mid);
    if (std::fabs(mm - target) <= tol) return m.with_exponent(mid);
    if (mm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw numeric_failure_error("with_target_mean: root finder did not converge");
}

MarginPtr tilt_discrete(const DiscreteMargin& m, double target, double tol) {
  const auto& pts = m.points();
  const auto& base = m.base_probs();
  auto mean_at = [&](double lambda) {
    const auto p = DiscreteMargin::tilted_probs(pts, base, lambda);
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) acc += p[i] * pts[i];
    return acc;
  };
  double t = m.tilt();
  if (std::fabs(mean_at(t) - target) <= tol) return m.with_tilt(t);

  double step = 1.0;
  double lo = t, hi = t;
  if (mean_at(t) < target) {
    while (mean_at(hi) < target) {
      lo = hi;
      hi += step;
      step *= 2.0;
      if (step > 1e9) {
        throw numeric_failure_error("with_target_mean: bracket expansion failed");
      }
    }
  } else {
    while (mean_at(lo) > target) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      if (step > 1e9) {
        throw numeric_failure_error("with_target_mean: bracket expansion failed");
      }
    }
  }
  for (int it = 0; it < kMaxRootIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double mm = mean_at(mid);
    if (std::fabs(mm - target) <= tol) return m.with_tilt(mid);
    if (mm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw numeric_failure_error("with_target_mean: root finder did not converge");
}

}  // namespace

MarginPtr with_target_mean(const MarginPtr& dist, double target, double tol) {
  if (!(target > dist->support_lo() && target < dist->support_hi())) {
    throw unreachable_mean_error(
        "with_target_mean: target outside the open support interval");
  }
  if (dist->is_discrete()) {
    return tilt_discrete(static_cast<const DiscreteMargin&>(*dist), target, tol);
  }
  return tilt_continuous(static_cast<const ContinuousMargin&>(*dist), target,
                         tol);
}

// ---------------------------------------------------------------------------
// Serialization

MarginPtr margin_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "beta") {
    const auto params = j.at("params").get<std::vector<double>>();
    return make_beta_margin(params.at(0), params.at(1),
                            j.value("transform_exponent", 1.0));
  }
  if (family == "truncated-normal") {
    const auto params = j.at("params").get<std::vector<double>>();
    return make_truncated_normal_margin(params.at(0), params.at(1),
                                        j.value("transform_exponent", 1.0));
  }
  if (family == "beta-binomial") {
    const auto params = j.at("params").get<std::vector<double>>();
    return make_beta_binomial_margin(j.at("k").get<int>(), params.at(0),
                                     params.at(1), j.value("tilt", 0.0));
  }
  if (family == "discrete-empirical") {
    return make_discrete_empirical_margin(
        j.at("support").at("points").get<std::vector<double>>(),
        j.at("probs").get<std::vector<double>>(), j.value("tilt", 0.0));
  }
  throw parse_error("unknown margin family in model file: " + family);
}

}  // namespace sigtestsim
