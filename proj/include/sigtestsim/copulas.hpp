#ifndef SIGTESTSIM_COPULAS_HPP
#define SIGTESTSIM_COPULAS_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "sigtestsim/margins.hpp"

namespace sigtestsim {

enum class CopulaFamily { independence, gaussian, clayton, gumbel, frank };

std::string copula_family_name(CopulaFamily f);
CopulaFamily copula_family_from_name(const std::string& name);

// Scores mapped through the fitted marginal cdfs, clamped into (0,1).
struct PseudoObservations {
  std::vector<double> u;
  std::vector<double> v;
  std::size_t n = 0;
};

struct CopulaModel {
  CopulaFamily family = CopulaFamily::independence;
  int rotation = 0;  // degrees: 0, 90, 180, 270
  double theta = 0.0;
  double kendall_tau = 0.0;

  nlohmann::json to_json() const;
  static CopulaModel from_json(const nlohmann::json& j);
};

CopulaModel make_copula(CopulaFamily family, double theta, int rotation = 0);

// Kendall tau implied by theta (rotation-adjusted).
double copula_tau(CopulaFamily family, double theta, int rotation = 0);

PseudoObservations pseudo_observations(const std::vector<double>& b,
                                       const std::vector<double>& e,
                                       const Margin& fb, const Margin& fe);

std::pair<CopulaModel, FitReport> fit_copula(
    const PseudoObservations& pobs,
    const std::set<CopulaFamily>& families = {
        CopulaFamily::independence, CopulaFamily::gaussian,
        CopulaFamily::clayton, CopulaFamily::gumbel, CopulaFamily::frank});

PseudoObservations copula_sample(const CopulaModel& model, std::size_t n,
                                 std::uint64_t seed);

// Sum of log copula densities; -inf if the density vanishes at some point.
double copula_loglik(const CopulaModel& model, const PseudoObservations& pobs);

double copula_log_density(const CopulaModel& model, double u, double v);

}  // namespace sigtestsim

#endif  // SIGTESTSIM_COPULAS_HPP
