#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sigtestsim/errors.hpp"
#include "sigtestsim/simulation.hpp"
#include "sigtestsim/stats.hpp"

using namespace sigtestsim;

namespace {

StochasticModel toy_model() {
  StochasticModel m;
  m.margin_b = make_beta_margin(2.0, 5.0);
  m.margin_e = make_beta_margin(2.5, 5.0);
  m.copula = make_copula(CopulaFamily::gaussian, 0.7);
  m.mode = ModelMode::fitted;
  return m;
}

}  // namespace

TEST_CASE("fitting identical score lists yields strong dependence") {
  const MarginPtr truth = make_beta_margin(2.0, 5.0);
  const auto b = truth->sample(800, 42);
  const StochasticModel m = fit_model(b, b, SupportHint::continuous());
  CHECK(m.copula.kendall_tau > 0.9);
  CHECK(std::fabs(m.mu_e() - m.mu_b()) < 0.01);
}

TEST_CASE("fitting recovers the marginal means of independent samples") {
  const auto b = make_beta_margin(2.0, 5.0)->sample(2000, 7);
  const auto e = make_beta_margin(5.0, 2.0)->sample(2000, 8);
  ModelFitReports reports;
  const StochasticModel m = fit_model(b, e, SupportHint::continuous(), &reports);
  CHECK(m.mu_b() == doctest::Approx(2.0 / 7.0).epsilon(0.1));
  CHECK(m.mu_e() == doctest::Approx(5.0 / 7.0).epsilon(0.1));
  CHECK(std::fabs(m.copula.kendall_tau) < 0.05);
  CHECK_FALSE(reports.margin_b.selected.empty());
  CHECK_FALSE(reports.copula.selected.empty());
}

TEST_CASE("fit_model rejects mismatched inputs") {
  const auto b = make_beta_margin(2.0, 5.0)->sample(100, 1);
  auto e = b;
  e.pop_back();
  CHECK_THROWS_AS(fit_model(b, e, SupportHint::continuous()),
                  invalid_data_error);
}

TEST_CASE("to_null shares the baseline margin and keeps the copula") {
  const StochasticModel m = toy_model();
  const StochasticModel null = to_null(m);
  CHECK(null.mode == ModelMode::null);
  CHECK(null.margin_e.get() == null.margin_b.get());
  CHECK(null.mu_e() == m.mu_b());
  CHECK(null.copula.family == m.copula.family);
  CHECK(null.copula.theta == m.copula.theta);
  // only fitted models may be nulled
  CHECK_THROWS_AS(to_null(null), invalid_configuration_error);
}

TEST_CASE("null simulation produces a mean difference near zero") {
  const StochasticModel null = to_null(toy_model());
  const std::size_t n = 100000;
  const PairedSample s = simulate(null, n, 2024);
  const double band = 4.0 * s.sd_d / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(s.mean_d) < band);
}

TEST_CASE("with_effect hits mu_b + delta within tolerance") {
  const StochasticModel m = toy_model();
  for (double delta : {0.05, 0.01, -0.03}) {
    const StochasticModel eff = with_effect(m, delta);
    CHECK(eff.mode == ModelMode::effect);
    CHECK(eff.delta == delta);
    CHECK(std::fabs(eff.mu_e() - (m.mu_b() + delta)) <= 1e-5);
    CHECK(eff.margin_b.get() == m.margin_b.get());
  }
  CHECK_THROWS_AS(with_effect(m, 0.9), unreachable_mean_error);
  const StochasticModel eff = with_effect(m, 0.05);
  CHECK_THROWS_AS(with_effect(eff, 0.01), invalid_configuration_error);
}

TEST_CASE("simulated scores stay inside the margins' support") {
  StochasticModel m = toy_model();
  m.margin_e = make_beta_binomial_margin(10, 2.0, 3.0);
  const PairedSample s = simulate(m, 5000, 3);
  REQUIRE(s.n == 5000);
  for (std::size_t i = 0; i < s.n; ++i) {
    REQUIRE(s.b[i] >= 0.0);
    REQUIRE(s.b[i] <= 1.0);
    // e is on the 0/10 .. 10/10 grid
    const double scaled = s.e[i] * 10.0;
    REQUIRE(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-9));
  }
}

TEST_CASE("simulation is deterministic in the seed") {
  const StochasticModel m = toy_model();
  const PairedSample a = simulate(m, 200, 99);
  const PairedSample b = simulate(m, 200, 99);
  const PairedSample c = simulate(m, 200, 100);
  for (std::size_t i = 0; i < a.n; ++i) {
    CHECK(a.b[i] == b.b[i]);
    CHECK(a.e[i] == b.e[i]);
  }
  CHECK(a.b[0] != c.b[0]);
}

TEST_CASE("simulated marginals match the model distributions") {
  const StochasticModel m = toy_model();
  const std::size_t n = 50000;
  const PairedSample s = simulate(m, n, 17);
  // one-sample KS of the baseline scores against margin_b
  std::vector<double> xs = s.b;
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = m.margin_b->cdf(xs[i]);
    d = std::max(d, std::fabs(f - (i + 1.0) / n));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  CHECK(d * std::sqrt(static_cast<double>(n)) < 2.0);
  CHECK(stats::mean(s.b) == doctest::Approx(m.mu_b()).epsilon(0.02));
  CHECK(stats::mean(s.e) == doctest::Approx(m.mu_e()).epsilon(0.02));
}

TEST_CASE("simulation preserves the copula's dependence") {
  const StochasticModel m = toy_model();
  const PairedSample s = simulate(m, 8000, 23);
  const double tau_hat = stats::kendall_tau(s.b, s.e);
  CHECK(std::fabs(tau_hat - m.copula.kendall_tau) < 0.05);
}

TEST_CASE("models round-trip through json") {
  StochasticModel m = toy_model();
  m.margin_e = make_beta_binomial_margin(10, 2.0, 3.0, 0.4);
  const StochasticModel eff = with_effect(m, 0.02);
  for (const StochasticModel& model : {m, to_null(m), eff}) {
    const StochasticModel back = StochasticModel::from_json(model.to_json());
    CHECK(back.mode == model.mode);
    CHECK(back.delta == model.delta);
    CHECK(back.mu_b() == doctest::Approx(model.mu_b()).epsilon(1e-12));
    CHECK(back.mu_e() == doctest::Approx(model.mu_e()).epsilon(1e-12));
    const PairedSample sa = simulate(model, 50, 5);
    const PairedSample sb = simulate(back, 50, 5);
    for (std::size_t i = 0; i < sa.n; ++i) {
      CHECK(sa.b[i] == doctest::Approx(sb.b[i]).epsilon(1e-12));
      CHECK(sa.e[i] == doctest::Approx(sb.e[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("null round-trip keeps the shared margin") {
  const StochasticModel null = to_null(toy_model());
  const StochasticModel back = StochasticModel::from_json(null.to_json());
  CHECK(back.mode == ModelMode::null);
  CHECK(back.mu_e() == back.mu_b());
}
