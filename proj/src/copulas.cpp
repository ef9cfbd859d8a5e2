#include "sigtestsim/copulas.hpp"

#include <algorithm>
#include <cmath>

#include "sigtestsim/errors.hpp"
#include "sigtestsim/rng.hpp"
#include "sigtestsim/stats.hpp"
#include "optimize.hpp"

namespace sigtestsim {

namespace {

void validate_theta(CopulaFamily family, double theta) {
  switch (family) {
    case CopulaFamily::independence:
      break;
    case CopulaFamily::gaussian:
      if (!(theta > -1.0 && theta < 1.0)) {
        throw invalid_argument_error("gaussian copula: rho must be in (-1,1)");
      }
      break;
    case CopulaFamily::clayton:
      if (!(theta > 0.0)) {
        throw invalid_argument_error("clayton copula: theta must be > 0");
      }
      break;
    case CopulaFamily::gumbel:
      if (!(theta >= 1.0)) {
        throw invalid_argument_error("gumbel copula: theta must be >= 1");
      }
      break;
    case CopulaFamily::frank:
      if (theta == 0.0) {
        throw invalid_argument_error("frank copula: theta must be non-zero");
      }
      break;
  }
}

// First Debye function D1(x) = (1/x) * int_0^x t/(e^t - 1) dt.
double debye1(double x) {
  const auto& q = stats::unit_quadrature();
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double t = q.nodes[i] * x;
    const double f = std::fabs(t) < 1e-8 ? 1.0 - 0.5 * t : t / std::expm1(t);
    acc += q.weights[i] * f;
  }
  return acc;  // the 1/x cancels the dt = x du factor
}

// Map (u, v) into the base copula's frame for the given rotation.
void unrotate(int rotation, double& u, double& v) {
  switch (rotation) {
    case 0: break;
    case 90: u = 1.0 - u; break;
    case 180: u = 1.0 - u; v = 1.0 - v; break;
    case 270: v = 1.0 - v; break;
    default:
      throw invalid_argument_error("copula rotation must be 0, 90, 180 or 270");
  }
}

double base_log_density(CopulaFamily family, double theta, double u, double v) {
  switch (family) {
    case CopulaFamily::independence:
      return 0.0;
    case CopulaFamily::gaussian: {
      const double rho = theta;
      const double z1 = stats::normal_quantile(u);
      const double z2 = stats::normal_quantile(v);
      const double r2 = 1.0 - rho * rho;
      return -0.5 * std::log(r2) -
             (rho * rho * (z1 * z1 + z2 * z2) - 2.0 * rho * z1 * z2) /
                 (2.0 * r2);
    }
    case CopulaFamily::clayton: {
      const double a = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
      if (!(a > 0.0)) return -HUGE_VAL;
      return std::log1p(theta) - (theta + 1.0) * (std::log(u) + std::log(v)) -
             (2.0 + 1.0 / theta) * std::log(a);
    }
    case CopulaFamily::gumbel: {
      const double x = -std::log(u);
      const double y = -std::log(v);
      const double a = std::pow(x, theta) + std::pow(y, theta);
      const double s = std::pow(a, 1.0 / theta);
      return -s + (theta - 1.0) * (std::log(x) + std::log(y)) - std::log(u) -
             std::log(v) + (1.0 / theta - 2.0) * std::log(a) +
             std::log(s + theta - 1.0);
    }
    case CopulaFamily::frank: {
      const double em = std::expm1(-theta);  // e^-theta - 1
      const double d = em + std::expm1(-theta * u) * std::expm1(-theta * v);
      if (d == 0.0) return -HUGE_VAL;  // denominator underflow near the corner
      return std::log(-theta * em) - theta * (u + v) - 2.0 * std::log(std::fabs(d));
    }
  }
  return -HUGE_VAL;
}

// Conditional cdf h(v | u) = dC(u,v)/du of the base (unrotated) copula.
double base_h(CopulaFamily family, double theta, double u, double v) {
  switch (family) {
    case CopulaFamily::independence:
      return v;
    case CopulaFamily::gaussian: {
      const double rho = theta;
      const double z1 = stats::normal_quantile(u);
      const double z2 = stats::normal_quantile(v);
      return stats::normal_cdf((z2 - rho * z1) / std::sqrt(1.0 - rho * rho));
    }
    case CopulaFamily::clayton: {
      const double a = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
      return std::pow(u, -theta - 1.0) * std::pow(a, -1.0 / theta - 1.0);
    }
    case CopulaFamily::gumbel: {
      const double x = -std::log(u);
      const double y = -std::log(v);
      const double a = std::pow(x, theta) + std::pow(y, theta);
      const double s = std::pow(a, 1.0 / theta);
      return std::exp(-s) * std::pow(a, 1.0 / theta - 1.0) *
             std::pow(x, theta - 1.0) / u;
    }
    case CopulaFamily::frank: {
      const double num = std::expm1(-theta * v) * std::exp(-theta * u);
      const double den =
          std::expm1(-theta) + std::expm1(-theta * u) * std::expm1(-theta * v);
      return num / den;
    }
  }
  return v;
}

// Invert h(. | u) by bisection: h is increasing in v.
double base_h_inverse(CopulaFamily family, double theta, double u, double w) {
  double lo = 1e-12, hi = 1.0 - 1e-12;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (base_h(family, theta, u, mid) < w) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string copula_family_name(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::independence: return "independence";
    case CopulaFamily::gaussian: return "gaussian";
    case CopulaFamily::clayton: return "clayton";
    case CopulaFamily::gumbel: return "gumbel";
    case CopulaFamily::frank: return "frank";
  }
  return "?";
}

CopulaFamily copula_family_from_name(const std::string& name) {
  if (name == "independence") return CopulaFamily::independence;
  if (name == "gaussian") return CopulaFamily::gaussian;
  if (name == "clayton") return CopulaFamily::clayton;
  if (name == "gumbel") return CopulaFamily::gumbel;
  if (name == "frank") return CopulaFamily::frank;
  throw parse_error("unknown copula family: " + name);
}

double copula_tau(CopulaFamily family, double theta, int rotation) {
  double tau = 0.0;
  switch (family) {
    case CopulaFamily::independence: tau = 0.0; break;
    case CopulaFamily::gaussian: tau = 2.0 / M_PI * std::asin(theta); break;
    case CopulaFamily::clayton: tau = theta / (theta + 2.0); break;
    case CopulaFamily::gumbel: tau = 1.0 - 1.0 / theta; break;
    case CopulaFamily::frank:
      tau = 1.0 + 4.0 / theta * (debye1(theta) - 1.0);
      break;
  }
  if (rotation == 90 || rotation == 270) tau = -tau;
  return tau;
}

CopulaModel make_copula(CopulaFamily family, double theta, int rotation) {
  validate_theta(family, theta);
  if (rotation != 0 && rotation != 90 && rotation != 180 && rotation != 270) {
    throw invalid_argument_error("copula rotation must be 0, 90, 180 or 270");
  }
  CopulaModel m;
  m.family = family;
  m.rotation = rotation;
  m.theta = theta;
  m.kendall_tau = copula_tau(family, theta, rotation);
  return m;
}

nlohmann::json CopulaModel::to_json() const {
  return {{"family", copula_family_name(family)},
          {"rotation", rotation},
          {"theta", theta}};
}

CopulaModel CopulaModel::from_json(const nlohmann::json& j) {
  return make_copula(copula_family_from_name(j.at("family").get<std::string>()),
                     j.at("theta").get<double>(), j.value("rotation", 0));
}

PseudoObservations pseudo_observations(const std::vector<double>& b,
                                       const std::vector<double>& e,
                                       const Margin& fb, const Margin& fe) {
  if (b.size() != e.size() || b.empty()) {
    throw invalid_data_error("pseudo_observations: paired lists required");
  }
  const double n = static_cast<double>(b.size());
  const double lo = 1.0 / (2.0 * n);
  const double hi = 1.0 - lo;
  PseudoObservations p;
  p.n = b.size();
  p.u.resize(p.n);
  p.v.resize(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    p.u[i] = std::clamp(fb.cdf(b[i]), lo, hi);
    p.v[i] = std::clamp(fe.cdf(e[i]), lo, hi);
  }
  return p;
}

double copula_log_density(const CopulaModel& model, double u, double v) {
  validate_theta(model.family, model.theta);
  unrotate(model.rotation, u, v);
  return base_log_density(model.family, model.theta, u, v);
}

double copula_loglik(const CopulaModel& model, const PseudoObservations& pobs) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pobs.n; ++i) {
    const double ld = copula_log_density(model, pobs.u[i], pobs.v[i]);
    if (ld == -HUGE_VAL) return -HUGE_VAL;
    acc += ld;
  }
  return acc;
}

PseudoObservations copula_sample(const CopulaModel& model, std::size_t n,
                                 std::uint64_t seed) {
  if (n < 1) throw invalid_argument_error("copula_sample: n must be >= 1");
  validate_theta(model.family, model.theta);
  rng_engine rng = make_rng(seed);
  PseudoObservations out;
  out.n = n;
  out.u.resize(n);
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w1 = uniform01(rng);
    const double w2 = uniform01(rng);
    double u, v;
    if (model.family == CopulaFamily::gaussian) {
      const double rho = model.theta;
      const double z1 = stats::normal_quantile(std::clamp(w1, 1e-15, 1.0 - 1e-15));
      const double z2 = stats::normal_quantile(std::clamp(w2, 1e-15, 1.0 - 1e-15));
      u = w1;
      v = stats::normal_cdf(rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
    } else if (model.family == CopulaFamily::independence) {
      u = w1;
      v = w2;
    } else {
      // Conditional-distribution method: u uniform, v = h^-1(w | u).
      u = std::clamp(w1, 1e-12, 1.0 - 1e-12);
      v = base_h_inverse(model.family, model.theta, u,
                         std::clamp(w2, 1e-12, 1.0 - 1e-12));
    }
    // Map the base draw into the rotated frame (the maps are involutions).
    unrotate(model.rotation, u, v);
    out.u[i] = u;
    out.v[i] = v;
  }
  return out;
}

std::pair<CopulaModel, FitReport> fit_copula(
    const PseudoObservations& pobs, const std::set<CopulaFamily>& families) {
  if (pobs.n < 10) {
    throw insufficient_sample_error("fit_copula: need at least 10 pairs");
  }

  struct Candidate {
    std::string name;
    CopulaModel model;
    double loglik;
  };
  std::vector<Candidate> candidates;

  auto add = [&](CopulaFamily fam, double theta, int rot) {
    CopulaModel m = make_copula(fam, theta, rot);
    const double ll = copula_loglik(m, pobs);
    std::string name = copula_family_name(fam);
    if (rot != 0) name += "@" + std::to_string(rot);
    candidates.push_back({std::move(name), m, ll});
  };

  if (families.count(CopulaFamily::independence)) {
    add(CopulaFamily::independence, 0.0, 0);
  }
  if (families.count(CopulaFamily::gaussian)) {
    // Closed form: normal-scores correlation.
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < pobs.n; ++i) {
      const double z1 = stats::normal_quantile(pobs.u[i]);
      const double z2 = stats::normal_quantile(pobs.v[i]);
      sxy += z1 * z2;
      sxx += z1 * z1;
      syy += z2 * z2;
    }
    const double rho0 =
        std::clamp(sxy / std::sqrt(sxx * syy), -0.999, 0.999);
    // the normal-scores correlation seeds a local likelihood refinement
    const double rho = detail::golden_section_max(
        [&](double r) {
          return copula_loglik(make_copula(CopulaFamily::gaussian, r, 0), pobs);
        },
        std::max(-0.999, rho0 - 0.05), std::min(0.999, rho0 + 0.05), 1e-9);
    add(CopulaFamily::gaussian, rho, 0);
  }
  auto fit_1d = [&](CopulaFamily fam, int rot, double lo, double hi) {
    const double theta = detail::golden_section_max(
        [&](double th) {
          return copula_loglik(make_copula(fam, th, rot), pobs);
        },
        lo, hi, 1e-7);
    add(fam, theta, rot);
  };
  if (families.count(CopulaFamily::clayton)) {
    for (int rot : {0, 90, 180, 270}) fit_1d(CopulaFamily::clayton, rot, 1e-4, 50.0);
  }
  if (families.count(CopulaFamily::gumbel)) {
    for (int rot : {0, 90, 180, 270}) fit_1d(CopulaFamily::gumbel, rot, 1.0, 50.0);
  }
  if (families.count(CopulaFamily::frank)) {
    fit_1d(CopulaFamily::frank, 0, 1e-4, 50.0);
    fit_1d(CopulaFamily::frank, 0, -50.0, -1e-4);
  }
  if (candidates.empty()) {
    throw invalid_configuration_error("fit_copula: no candidate families");
  }

  FitReport report;
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    report.candidates.emplace_back(candidates[i].name, candidates[i].loglik);
    if (candidates[i].loglik > candidates[best].loglik) best = i;
  }
  report.selected = candidates[best].name;
  report.loglik = candidates[best].loglik;
  return {candidates[best].model, report};
}

}  // namespace sigtestsim
