#ifndef SIGTESTSIM_SIMULATION_HPP
#define SIGTESTSIM_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "sigtestsim/copulas.hpp"
#include "sigtestsim/margins.hpp"
#include "sigtestsim/paired_tests.hpp"

namespace sigtestsim {

enum class ModelMode { fitted, null, effect };

std::string model_mode_name(ModelMode m);

// Two margins plus a copula: the generative model with known means.
struct StochasticModel {
  MarginPtr margin_b;
  MarginPtr margin_e;
  CopulaModel copula;
  ModelMode mode = ModelMode::fitted;
  double delta = 0.0;  // imposed effect, meaningful for ModelMode::effect

  double mu_b() const { return margin_b->mean(); }
  double mu_e() const { return margin_e->mean(); }

  nlohmann::json to_json() const;
  static StochasticModel from_json(const nlohmann::json& j);
};

struct ModelFitReports {
  FitReport margin_b;
  FitReport margin_e;
  FitReport copula;
};

StochasticModel fit_model(const std::vector<double>& b,
                          const std::vector<double>& e, const SupportHint& hint,
                          ModelFitReports* reports = nullptr);

// Null-hypothesis variant: the experimental margin becomes the baseline
// margin (shared object), the copula is unchanged.
StochasticModel to_null(const StochasticModel& model);

// Fixed-effect variant: the experimental margin is tilted so that
// mu_e = mu_b + delta within 1e-5.
StochasticModel with_effect(const StochasticModel& model, double delta);

PairedSample simulate(const StochasticModel& model, std::size_t n,
                      std::uint64_t seed);

}  // namespace sigtestsim

#endif  // SIGTESTSIM_SIMULATION_HPP
