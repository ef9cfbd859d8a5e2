#include "sigtestsim/simulation.hpp"

#include <cmath>

#include "sigtestsim/errors.hpp"

namespace sigtestsim {

std::string model_mode_name(ModelMode m) {
  switch (m) {
    case ModelMode::fitted: return "fitted";
    case ModelMode::null: return "null";
    case ModelMode::effect: return "effect";
  }
  return "?";
}

nlohmann::json StochasticModel::to_json() const {
  return {{"version", 1},
          {"margin_b", margin_b->to_json()},
          {"margin_e", margin_e->to_json()},
          {"copula", copula.to_json()},
          {"mode", model_mode_name(mode)},
          {"delta", delta}};
}

StochasticModel StochasticModel::from_json(const nlohmann::json& j) {
  if (j.value("version", 0) != 1) {
    throw parse_error("model file: unsupported version");
  }
  StochasticModel m;
  m.margin_b = margin_from_json(j.at("margin_b"));
  m.margin_e = margin_from_json(j.at("margin_e"));
  m.copula = CopulaModel::from_json(j.at("copula"));
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "fitted") {
    m.mode = ModelMode::fitted;
  } else if (mode == "null") {
    m.mode = ModelMode::null;
    m.margin_e = m.margin_b;
  } else if (mode == "effect") {
    m.mode = ModelMode::effect;
  } else {
    throw parse_error("model file: unknown mode " + mode);
  }
  m.delta = j.value("delta", 0.0);
  return m;
}

StochasticModel fit_model(const std::vector<double>& b,
                          const std::vector<double>& e, const SupportHint& hint,
                          ModelFitReports* reports) {
  if (b.size() != e.size()) {
    throw invalid_data_error("fit_model: score lists differ in length");
  }
  if (b.size() < 10) {
    throw insufficient_sample_error("fit_model: need at least 10 topics");
  }
  auto [fb, rb] = fit_margin(b, hint);
  auto [fe, re] = fit_margin(e, hint);
  const PseudoObservations pobs = pseudo_observations(b, e, *fb, *fe);
  auto [cop, rc] = fit_copula(pobs);
  if (reports != nullptr) {
    reports->margin_b = rb;
    reports->margin_e = re;
    reports->copula = rc;
  }
  StochasticModel m;
  m.margin_b = fb;
  m.margin_e = fe;
  m.copula = cop;
  m.mode = ModelMode::fitted;
  m.delta = m.mu_e() - m.mu_b();
  return m;
}

StochasticModel to_null(const StochasticModel& model) {
  if (model.mode != ModelMode::fitted) {
    throw invalid_configuration_error("to_null: model must be in fitted mode");
  }
  StochasticModel m = model;
  m.margin_e = m.margin_b;
  m.mode = ModelMode::null;
  m.delta = 0.0;
  return m;
}

StochasticModel with_effect(const StochasticModel& model, double delta) {
  if (model.mode == ModelMode::effect) {
    throw invalid_configuration_error(
        "with_effect: model already carries an imposed effect");
  }
  StochasticModel m = model;
  m.margin_e = with_target_mean(model.margin_e, model.mu_b() + delta, 1e-5);
  m.mode = ModelMode::effect;
  m.delta = delta;
  return m;
}

PairedSample simulate(const StochasticModel& model, std::size_t n,
                      std::uint64_t seed) {
  if (n < 1) throw invalid_argument_error("simulate: n must be >= 1");
  const PseudoObservations uv = copula_sample(model.copula, n, seed);
  std::vector<double> b(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = model.margin_b->quantile(uv.u[i]);
    e[i] = model.margin_e->quantile(uv.v[i]);
  }
  return PairedSample::from_scores(std::move(b), std::move(e));
}

}  // namespace sigtestsim
