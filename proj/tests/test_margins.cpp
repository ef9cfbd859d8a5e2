#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sigtestsim/errors.hpp"
#include "sigtestsim/margins.hpp"
#include "sigtestsim/stats.hpp"

using namespace sigtestsim;

namespace {

// Independent estimate of the mean via a fine midpoint rule on the cdf:
// E[X] = integral over [0,1] of (1 - F(x)) dx for support within [0,1].
double mean_by_integration(const Margin& m) {
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    acc += 1.0 - m.cdf(x);
  }
  return acc / n;
}

double ks_statistic(std::vector<double> xs, const Margin& m) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = m.cdf(xs[i]);
    d = std::max(d, std::fabs(f - (i + 1) / n));
    d = std::max(d, std::fabs(f - i / n));
  }
  return d;
}

}  // namespace

TEST_CASE("uniform beta margin has identity cdf and quantile") {
  const MarginPtr m = make_beta_margin(1.0, 1.0);
  CHECK(m->cdf(0.3) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(m->quantile(0.25) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(m->mean() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_FALSE(m->is_discrete());
}

TEST_CASE("beta margin mean matches the closed form") {
  const MarginPtr m = make_beta_margin(2.0, 5.0);
  CHECK(m->mean() == doctest::Approx(2.0 / 7.0).epsilon(1e-7));
  CHECK(m->mean() == doctest::Approx(mean_by_integration(*m)).epsilon(1e-5));
}

TEST_CASE("quantile inverts the cdf on a continuous margin") {
  for (const MarginPtr& m :
       {make_beta_margin(2.0, 5.0), make_truncated_normal_margin(0.4, 0.2)}) {
    for (double u : {0.01, 0.1, 0.33, 0.5, 0.77, 0.95, 0.999}) {
      CHECK(m->cdf(m->quantile(u)) == doctest::Approx(u).epsilon(1e-8));
    }
  }
}

TEST_CASE("beta-binomial margin with flat prior is uniform on the grid") {
  // BB(k=10, a=1, b=1) puts mass 1/11 on each of 0/10 .. 10/10
  const MarginPtr m = make_beta_binomial_margin(10, 1.0, 1.0);
  CHECK(m->is_discrete());
  CHECK(m->mean() == doctest::Approx(0.5).epsilon(1e-10));
  for (int j = 0; j <= 10; ++j) {
    CHECK(m->cdf(j / 10.0) == doctest::Approx((j + 1) / 11.0).epsilon(1e-10));
  }
  // generalized inverse: quantile(u) is the smallest point with cdf >= u
  CHECK(m->quantile(0.05) == doctest::Approx(0.0));
  CHECK(m->quantile(1.0 / 11.0 + 1e-12) == doctest::Approx(0.1));
  CHECK(m->quantile(1.0) == doctest::Approx(1.0));
}

TEST_CASE("discrete empirical margin reproduces its probabilities") {
  const MarginPtr m =
      make_discrete_empirical_margin({0.0, 0.5, 1.0}, {0.2, 0.5, 0.3});
  CHECK(m->mean() == doctest::Approx(0.5 * 0.5 + 1.0 * 0.3).epsilon(1e-12));
  CHECK(m->cdf(0.0) == doctest::Approx(0.2));
  CHECK(m->cdf(0.49) == doctest::Approx(0.2));
  CHECK(m->cdf(0.5) == doctest::Approx(0.7));
  CHECK(m->quantile(0.71) == doctest::Approx(1.0));
}

TEST_CASE("fitting recovers a beta sample") {
  const MarginPtr truth = make_beta_margin(2.0, 5.0);
  const auto draws = truth->sample(500, 1234);
  const auto [fitted, report] = fit_margin(draws, SupportHint::continuous());
  CHECK(report.candidates.size() == 2);
  CHECK(fitted->mean() == doctest::Approx(2.0 / 7.0).epsilon(0.1));
  // the selected candidate has the highest log-likelihood
  for (const auto& [name, ll] : report.candidates) {
    CHECK(report.loglik >= ll - 1e-9);
  }
}

TEST_CASE("discrete hints fit only discrete families") {
  const MarginPtr truth = make_beta_binomial_margin(10, 3.0, 4.0);
  const auto draws = truth->sample(400, 99);
  const auto [fitted, report] = fit_margin(draws, SupportHint::discrete(10));
  CHECK(fitted->is_discrete());
  CHECK(fitted->mean() == doctest::Approx(3.0 / 7.0).epsilon(0.15));
  for (const auto& [name, ll] : report.candidates) {
    CHECK((name.find("beta-binomial") != std::string::npos ||
           name.find("discrete-empirical") != std::string::npos));
  }
}

TEST_CASE("fitting rejects bad input") {
  CHECK_THROWS_AS(fit_margin({0.1, 0.2, 0.3}, SupportHint::continuous()),
                  insufficient_sample_error);
  std::vector<double> constant(20, 0.4);
  CHECK_THROWS_AS(fit_margin(constant, SupportHint::continuous()),
                  degenerate_sample_error);
  std::vector<double> off_grid(20, 0.0);
  for (std::size_t i = 0; i < off_grid.size(); ++i) off_grid[i] = i % 2 ? 0.3 : 0.55;
  CHECK_THROWS_AS(fit_margin(off_grid, SupportHint::discrete(10)),
                  invalid_data_error);
}

TEST_CASE("with_target_mean hits the target on a continuous margin") {
  const MarginPtr base = make_beta_margin(2.0, 2.0);
  // identity target first
  const MarginPtr same = with_target_mean(base, 0.5);
  CHECK(same->mean() == doctest::Approx(0.5).epsilon(2e-5));
  for (double target : {0.55, 0.62, 0.41, 0.3}) {
    const MarginPtr tilted = with_target_mean(base, target);
    CHECK(std::fabs(tilted->mean() - target) <= 1e-5);
    // independent verification of the claimed mean
    CHECK(mean_by_integration(*tilted) == doctest::Approx(target).epsilon(1e-4));
    // support unchanged
    CHECK(tilted->support_lo() == base->support_lo());
    CHECK(tilted->support_hi() == base->support_hi());
  }
}

TEST_CASE("with_target_mean hits the target on a discrete margin") {
  const MarginPtr base = make_beta_binomial_margin(10, 2.0, 3.0);
  for (double target : {0.5, 0.25, 0.65}) {
    const MarginPtr tilted = with_target_mean(base, target);
    CHECK(std::fabs(tilted->mean() - target) <= 1e-5);
    CHECK(tilted->is_discrete());
  }
}

TEST_CASE("with_target_mean rejects unreachable targets") {
  const MarginPtr cont = make_beta_margin(2.0, 5.0);
  CHECK_THROWS_AS(with_target_mean(cont, 1.01), unreachable_mean_error);
  CHECK_THROWS_AS(with_target_mean(cont, -0.01), unreachable_mean_error);
  const MarginPtr disc = make_beta_binomial_margin(10, 2.0, 3.0);
  CHECK_THROWS_AS(with_target_mean(disc, 1.2), unreachable_mean_error);
}

TEST_CASE("tilting to a larger mean shifts quantiles upward") {
  const MarginPtr base = make_beta_margin(2.0, 2.0);
  const MarginPtr lo = with_target_mean(base, 0.55);
  const MarginPtr hi = with_target_mean(base, 0.62);
  for (double u = 0.05; u < 1.0; u += 0.05) {
    CHECK(hi->quantile(u) >= lo->quantile(u) - 1e-12);
  }
}

TEST_CASE("sampling agrees with the model cdf") {
  const MarginPtr m = make_beta_margin(2.0, 5.0);
  const auto xs = m->sample(100000, 77);
  for (double x : xs) {
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
  }
  CHECK(ks_statistic(xs, *m) * std::sqrt(100000.0) < 2.0);

  // deterministic in the seed
  const auto ys = m->sample(100, 77);
  for (std::size_t i = 0; i < ys.size(); ++i) CHECK(ys[i] == xs[i]);
}

TEST_CASE("margins serialize and round-trip through json") {
  const std::vector<MarginPtr> models = {
      make_beta_margin(2.0, 5.0, 1.3),
      make_truncated_normal_margin(0.4, 0.25, 0.9),
      make_beta_binomial_margin(10, 2.0, 3.0, 0.7),
      make_discrete_empirical_margin({0.0, 0.5, 1.0}, {0.2, 0.5, 0.3}, -0.4)};
  for (const MarginPtr& m : models) {
    const MarginPtr back = margin_from_json(m->to_json());
    CHECK(back->family() == m->family());
    CHECK(back->mean() == doctest::Approx(m->mean()).epsilon(1e-12));
    for (double x = 0.0; x <= 1.0; x += 0.1) {
      CHECK(back->cdf(x) == doctest::Approx(m->cdf(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("measure support hints") {
  CHECK(SupportHint::for_measure("ap").kind == SupportHint::Kind::continuous);
  const SupportHint p10 = SupportHint::for_measure("p10");
  CHECK(p10.kind == SupportHint::Kind::discrete);
  CHECK(p10.contains(0.3));
  CHECK_FALSE(p10.contains(0.35));
  const SupportHint rr = SupportHint::for_measure("rr");
  CHECK(rr.contains(0.0));
  CHECK(rr.contains(1.0));
  CHECK(rr.contains(1.0 / 3.0));
  CHECK_FALSE(rr.contains(0.4));
}
