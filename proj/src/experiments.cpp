#include "sigtestsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

#include "sigtestsim/errors.hpp"
#include "sigtestsim/rng.hpp"
#include "sigtestsim/simulation.hpp"
#include "sigtestsim/stats.hpp"

namespace sigtestsim {

std::vector<double> ScoreMatrix::column(std::size_t s) const {
  std::vector<double> col(topics.size());
  for (std::size_t t = 0; t < topics.size(); ++t) col[t] = scores[t][s];
  return col;
}

std::vector<double> ScoreMatrix::system_means() const {
  std::vector<double> means(systems.size(), 0.0);
  for (const auto& row : scores) {
    for (std::size_t s = 0; s < systems.size(); ++s) means[s] += row[s];
  }
  for (double& m : means) m /= static_cast<double>(topics.size());
  return means;
}

std::size_t ScoreMatrix::system_index(const std::string& id) const {
  const auto it = std::find(systems.begin(), systems.end(), id);
  if (it == systems.end()) {
    throw invalid_data_error("unknown system id: " + id);
  }
  return static_cast<std::size_t>(it - systems.begin());
}

std::string experiment_mode_name(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::type1: return "type1";
    case ExperimentMode::power: return "power";
    case ExperimentMode::type3: return "type3";
  }
  return "?";
}

ExperimentMode experiment_mode_from_name(const std::string& name) {
  if (name == "type1") return ExperimentMode::type1;
  if (name == "power") return ExperimentMode::power;
  if (name == "type3") return ExperimentMode::type3;
  throw invalid_configuration_error("unknown experiment mode: " + name);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw invalid_configuration_error("config: trials must be >= 1");
  if (n_topics < 1) throw invalid_configuration_error("config: n_topics must be >= 1");
  if (alphas.empty()) throw invalid_configuration_error("config: empty alpha grid");
  if (tests.empty()) throw invalid_configuration_error("config: no tests selected");
  if (tails != 1 && tails != 2) {
    throw invalid_configuration_error("config: tails must be 1 or 2");
  }
  if (mode != ExperimentMode::type1 && deltas.empty()) {
    throw invalid_configuration_error("config: empty delta grid");
  }
  if (replicas < 1) throw invalid_configuration_error("config: replicas must be >= 1");
}

std::pair<std::size_t, std::size_t> select_system_pair(
    const ScoreMatrix& matrix, ExperimentMode mode, double delta,
    const ExperimentConfig& config, std::uint64_t seed) {
  const std::size_t m = matrix.systems.size();
  if (m < 14) {
    throw insufficient_systems_error(
        "select_system_pair: need at least 14 systems");
  }
  const std::vector<double> means = matrix.system_means();
  std::vector<std::size_t> by_mean_desc(m);
  std::iota(by_mean_desc.begin(), by_mean_desc.end(), 0);
  std::sort(by_mean_desc.begin(), by_mean_desc.end(),
            [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });

  const auto top_count = static_cast<std::size_t>(
      std::floor(config.top_fraction * static_cast<double>(m)));
  if (top_count < 2) {
    throw insufficient_systems_error("select_system_pair: top pool too small");
  }
  std::vector<std::size_t> pool(by_mean_desc.begin(),
                                by_mean_desc.begin() + top_count);

  rng_engine rng = make_rng(seed);
  if (mode == ExperimentMode::type1) {
    const std::size_t i = uniform_index(rng, pool.size());
    std::size_t j = uniform_index(rng, pool.size() - 1);
    if (j >= i) ++j;
    return {pool[i], pool[j]};
  }

  // Power / Type III: baseline from the bottom fraction of the pool, the
  // experimental candidate among the systems with mean closest to
  // mean(baseline) + delta.
  std::vector<std::size_t> pool_asc(pool.rbegin(), pool.rend());  // ascending mean
  const auto bottom_count = static_cast<std::size_t>(std::floor(
      config.baseline_bottom_fraction * static_cast<double>(pool.size())));
  if (bottom_count < 1) {
    throw insufficient_systems_error("select_system_pair: baseline pool empty");
  }
  const std::size_t baseline = pool_asc[uniform_index(rng, bottom_count)];
  const double target = means[baseline] + delta;

  std::vector<std::size_t> candidates;
  for (std::size_t s : pool) {
    if (s != baseline) candidates.push_back(s);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) {
              return std::fabs(means[a] - target) < std::fabs(means[b] - target);
            });
  const std::size_t k = std::min(config.candidate_pool, candidates.size());
  if (k < 1) {
    throw insufficient_systems_error("select_system_pair: candidate pool empty");
  }
  const std::size_t experimental = candidates[uniform_index(rng, k)];
  return {baseline, experimental};
}

namespace {

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested != 0 ? requested
                              : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap_str = std::getenv("SIGTESTSIM_THREADS")) {
    const long cap = std::strtol(cap_str, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

// Seed stream tags within one trial.
enum : std::uint64_t {
  kStreamSelect = 1,
  kStreamSimulate = 2,
  kStreamTests = 3,
};

TrialRecord run_trial(const ExperimentConfig& config, const ScoreMatrix& matrix,
                      std::size_t trial, std::size_t delta_index, double delta) {
  TrialRecord rec;
  rec.trial = trial;
  rec.delta_index = delta_index;
  rec.seed = derive_seed(config.master_seed, trial, delta_index);

  const SupportHint hint = matrix.support();
  StochasticModel generator;
  constexpr int kMaxRedraws = 10;
  int attempt = 0;
  for (;; ++attempt) {
    if (attempt > kMaxRedraws) {
      throw unreachable_mean_error(
          "experiment trial: no feasible system pair after redraws");
    }
    const auto [ib, ie] = select_system_pair(
        matrix, config.mode, delta, config,
        derive_seed(rec.seed, kStreamSelect, static_cast<std::uint64_t>(attempt)));
    const StochasticModel fitted =
        fit_model(matrix.column(ib), matrix.column(ie), hint);
    if (config.mode == ExperimentMode::type1) {
      generator = to_null(fitted);
      break;
    }
    try {
      generator = with_effect(fitted, delta);
      break;
    } catch (const unreachable_mean_error&) {
      // redraw with a fresh candidate
    }
  }

  const PairedSample sample =
      simulate(generator, config.n_topics, derive_seed(rec.seed, kStreamSimulate));
  rec.mean_d = sample.mean_d;

  rec.p1.resize(config.tests.size());
  rec.p2.resize(config.tests.size());
  for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
    const std::uint64_t test_seed = derive_seed(rec.seed, kStreamTests, ti);
    try {
      TestOutcome out;
      switch (config.tests[ti]) {
        case TestId::t: out = t_test(sample); break;
        case TestId::wilcoxon: out = wilcoxon_test(sample); break;
        case TestId::sign: out = sign_test(sample, config.sign_h); break;
        case TestId::permutation:
          out = permutation_test(sample, config.replicas, test_seed);
          break;
        case TestId::bootstrap:
          out = bootstrap_shift_test(sample, config.replicas, test_seed);
          break;
      }
      rec.p1[ti] = out.p1;
      rec.p2[ti] = out.p2;
    } catch (const error&) {
      // A degenerate simulated sample (all ties, zero variance) carries no
      // evidence against the null: never significant.
      rec.p1[ti] = 1.0;
      rec.p2[ti] = 1.0;
    }
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ScoreMatrix& matrix) {
  config.validate();
  const std::vector<double> deltas =
      config.mode == ExperimentMode::type1 ? std::vector<double>{0.0}
                                           : config.deltas;

  const std::size_t total = config.trials * deltas.size();
  std::vector<TrialRecord> records(total);
  const unsigned n_threads = resolve_threads(config.threads);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const std::size_t trial = idx / deltas.size();
      const std::size_t di = idx % deltas.size();
      try {
        records[idx] = run_trial(config, matrix, trial, di, deltas[di]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentResult result;
  result.config = config;
  result.records = std::move(records);
  result.rows = aggregate(config, result.records);
  return result;
}

}  // namespace

std::vector<ReportRow> aggregate(const ExperimentConfig& config,
                                 const std::vector<TrialRecord>& records) {
  const std::vector<double> deltas =
      config.mode == ExperimentMode::type1 ? std::vector<double>{0.0}
                                           : config.deltas;
  std::vector<ReportRow> rows;
  for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      for (double alpha : config.alphas) {
        ReportRow row;
        row.test = test_name(config.tests[ti]);
        row.n_topics = config.n_topics;
        row.alpha = alpha;
        if (config.mode != ExperimentMode::type1) row.delta = deltas[di];
        for (const TrialRecord& rec : records) {
          if (rec.delta_index != di) continue;
          ++row.trials;
          bool reject;
          if (config.mode == ExperimentMode::type3) {
            reject = rec.mean_d < 0.0 && rec.p2[ti] <= alpha;
          } else {
            const double p = config.tails == 1 ? rec.p1[ti] : rec.p2[ti];
            reject = p <= alpha;
          }
          if (reject) ++row.rejections;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

ExperimentResult run_type1(const ExperimentConfig& config,
                           const ScoreMatrix& matrix) {
  if (config.mode != ExperimentMode::type1) {
    throw invalid_configuration_error("run_type1: config mode mismatch");
  }
  return run_experiment(config, matrix);
}

ExperimentResult run_power(const ExperimentConfig& config,
                           const ScoreMatrix& matrix) {
  if (config.mode != ExperimentMode::power) {
    throw invalid_configuration_error("run_power: config mode mismatch");
  }
  return run_experiment(config, matrix);
}

ExperimentResult run_type3(const ExperimentConfig& config,
                           const ScoreMatrix& matrix) {
  if (config.mode != ExperimentMode::type3) {
    throw invalid_configuration_error("run_type3: config mode mismatch");
  }
  ExperimentConfig cfg = config;
  cfg.tails = 2;
  return run_experiment(cfg, matrix);
}

ScoreMatrix synth_matrix(std::size_t n_topics, std::size_t n_systems,
                         std::uint64_t seed, const std::string& measure) {
  if (n_systems < 14) {
    throw invalid_configuration_error("synth_matrix: need at least 14 systems");
  }
  const SupportHint hint = SupportHint::for_measure(measure);

  ScoreMatrix mat;
  mat.measure = measure;
  for (std::size_t t = 0; t < n_topics; ++t) {
    mat.topics.push_back("t" + std::to_string(t + 1));
  }
  for (std::size_t s = 0; s < n_systems; ++s) {
    mat.systems.push_back("s" + std::to_string(s + 1));
  }

  // System means spread over [0.25, 0.60]; moderate concentration keeps
  // per-topic variance high. Shared latent factor induces the positive
  // dependence typical of systems scored on the same topics.
  constexpr double kConc = 6.0;
  constexpr double kDependence = 0.5;
  std::vector<MarginPtr> margins;
  for (std::size_t s = 0; s < n_systems; ++s) {
    const double m =
        0.25 + 0.35 * static_cast<double>(s) / static_cast<double>(n_systems - 1);
    margins.push_back(make_beta_margin(m * kConc, (1.0 - m) * kConc));
  }

  std::vector<double> points;
  if (hint.kind != SupportHint::Kind::continuous) {
    points = hint.support_points();
  }
  auto snap = [&](double x) {
    if (points.empty()) return x;
    double best = points.front();
    for (double p : points) {
      if (std::fabs(p - x) < std::fabs(best - x)) best = p;
    }
    return best;
  };

  rng_engine rng = make_rng(seed);
  mat.scores.assign(n_topics, std::vector<double>(n_systems, 0.0));
  const double w = std::sqrt(kDependence);
  const double w_ind = std::sqrt(1.0 - kDependence);
  for (std::size_t t = 0; t < n_topics; ++t) {
    const double z = stats::normal_quantile(
        std::clamp(uniform01(rng), 1e-15, 1.0 - 1e-15));
    for (std::size_t s = 0; s < n_systems; ++s) {
      const double eps = stats::normal_quantile(
          std::clamp(uniform01(rng), 1e-15, 1.0 - 1e-15));
      const double u = stats::normal_cdf(w * z + w_ind * eps);
      mat.scores[t][s] = snap(margins[s]->quantile(u));
    }
  }
  return mat;
}

}  // namespace sigtestsim
