#ifndef SIGTESTSIM_EXPERIMENTS_HPP
#define SIGTESTSIM_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigtestsim/margins.hpp"
#include "sigtestsim/paired_tests.hpp"

namespace sigtestsim {

// Complete topics x systems grid of effectiveness scores.
struct ScoreMatrix {
  std::vector<std::string> topics;
  std::vector<std::string> systems;
  std::vector<std::vector<double>> scores;  // [topic][system]
  std::string measure = "ap";

  SupportHint support() const { return SupportHint::for_measure(measure); }
  std::vector<double> column(std::size_t s) const;
  std::vector<double> system_means() const;
  std::size_t system_index(const std::string& id) const;
};

enum class ExperimentMode { type1, power, type3 };

std::string experiment_mode_name(ExperimentMode m);
ExperimentMode experiment_mode_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::type1;
  std::size_t n_topics = 50;
  std::size_t trials = 2000;
  std::vector<double> alphas = {0.01, 0.05};
  std::vector<double> deltas;  // power / type3 only
  std::vector<TestId> tests = {TestId::t, TestId::wilcoxon, TestId::sign,
                               TestId::permutation, TestId::bootstrap};
  int tails = 2;
  std::uint64_t replicas = 10000;
  std::uint64_t master_seed = 1;
  double sign_h = 0.01;
  double top_fraction = 0.90;
  double baseline_bottom_fraction = 0.75;
  std::size_t candidate_pool = 10;
  unsigned threads = 0;  // 0 = auto; capped by SIGTESTSIM_THREADS

  void validate() const;
};

// One simulated trial: the p-values of every configured test, aligned with
// ExperimentConfig::tests.
struct TrialRecord {
  std::size_t trial = 0;
  std::size_t delta_index = 0;
  std::uint64_t seed = 0;
  double mean_d = 0.0;
  std::vector<double> p1;
  std::vector<double> p2;
};

struct ReportRow {
  std::string test;
  std::size_t n_topics = 0;
  double alpha = 0.0;
  std::optional<double> delta;
  std::size_t trials = 0;
  std::size_t rejections = 0;

  double rate() const {
    return static_cast<double>(rejections) / static_cast<double>(trials);
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // indexed trial-major, delta-minor
  std::vector<ReportRow> rows;
};

// Baseline/experimental pair selection per protocol; returns system indices.
std::pair<std::size_t, std::size_t> select_system_pair(
    const ScoreMatrix& matrix, ExperimentMode mode, double delta,
    const ExperimentConfig& config, std::uint64_t seed);

ExperimentResult run_type1(const ExperimentConfig& config,
                           const ScoreMatrix& matrix);
ExperimentResult run_power(const ExperimentConfig& config,
                           const ScoreMatrix& matrix);
ExperimentResult run_type3(const ExperimentConfig& config,
                           const ScoreMatrix& matrix);

// Recompute report rows from the per-trial records (aggregation is an
// exact count; identical to what run_* produced).
std::vector<ReportRow> aggregate(const ExperimentConfig& config,
                                 const std::vector<TrialRecord>& records);

// Synthetic stand-in score matrix: spread system means and a shared
// positive-dependence latent factor.
ScoreMatrix synth_matrix(std::size_t n_topics, std::size_t n_systems,
                         std::uint64_t seed, const std::string& measure);

}  // namespace sigtestsim

#endif  // SIGTESTSIM_EXPERIMENTS_HPP
