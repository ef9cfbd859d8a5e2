// sigtestsim: paired significance tests and copula-based simulation of
// evaluation scores, with Type I / power / Type III calibration harnesses.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sigtestsim/errors.hpp"
#include "sigtestsim/experiments.hpp"
#include "sigtestsim/io.hpp"
#include "sigtestsim/rng.hpp"
#include "sigtestsim/simulation.hpp"

namespace fs = std::filesystem;
using namespace sigtestsim;

namespace {

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    const auto p1 = spec.find(':');
    const auto p2 = spec.find(':', p1 + 1);
    if (p2 == std::string::npos) {
      throw invalid_configuration_error("grid must be a:b:step, got " + spec);
    }
    const double a = parse_double(spec.substr(0, p1), "grid start");
    const double b = parse_double(spec.substr(p1 + 1, p2 - p1 - 1), "grid end");
    const double step = parse_double(spec.substr(p2 + 1), "grid step");
    if (!(step > 0.0) || b < a) {
      throw invalid_configuration_error("bad grid range: " + spec);
    }
    for (double v = a; v <= b + 1e-12; v += step) values.push_back(v);
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto next = spec.find(',', pos);
      const std::string tok =
          spec.substr(pos, next == std::string::npos ? spec.size() - pos
                                                     : next - pos);
      if (!tok.empty()) values.push_back(parse_double(tok, "grid value"));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }
  if (values.empty()) throw invalid_configuration_error("empty grid: " + spec);
  return values;
}

std::vector<TestId> parse_tests(const std::string& spec) {
  std::vector<TestId> tests;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto next = spec.find(',', pos);
    const std::string tok =
        spec.substr(pos, next == std::string::npos ? spec.size() - pos
                                                   : next - pos);
    if (!tok.empty()) tests.push_back(test_from_name(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (tests.empty()) throw invalid_configuration_error("no tests selected");
  return tests;
}

std::uint64_t resolve_seed(std::uint64_t requested) {
  if (requested != 0) return requested;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<double> load_score_vector(const std::string& path) {
  std::vector<double> scores;
  std::size_t line_no = 0;
  for (const auto& chunk : {read_text_file(path)}) {
    std::string cur;
    for (char c : chunk + "\n") {
      if (c == '\n' || c == ',') {
        ++line_no;
        while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) {
          cur.pop_back();
        }
        if (!cur.empty() && cur[0] != '#') {
          scores.push_back(
              parse_double(cur, path + " line " + std::to_string(line_no)));
        }
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  if (scores.empty()) throw invalid_data_error(path + ": no scores");
  return scores;
}

void print_outcomes(const std::vector<TestOutcome>& outcomes,
                    const std::string& out_path) {
  std::string csv = "test,statistic,p1,p2,T,seed\n";
  std::printf("%-12s %12s %12s %12s %10s %12s\n", "test", "statistic", "p1",
              "p2", "T", "seed");
  for (const auto& o : outcomes) {
    const std::string t = o.replicas ? std::to_string(*o.replicas) : "";
    const std::string s = o.seed ? std::to_string(*o.seed) : "";
    std::printf("%-12s %12.6g %12.6g %12.6g %10s %12s\n",
                test_name(o.test_id).c_str(), o.statistic, o.p1, o.p2, t.c_str(),
                s.c_str());
    csv += test_name(o.test_id) + "," + format_double(o.statistic) + "," +
           format_double(o.p1) + "," + format_double(o.p2) + "," + t + "," + s +
           "\n";
  }
  if (!out_path.empty()) write_text_file(out_path, csv);
}

int run(int argc, char** argv) {
  CLI::App app{"Paired significance tests and stochastic simulation of "
               "paired evaluation scores"};
  app.require_subcommand(1);
  // '--h' is the sign-test tie threshold, so the help flag is long-only
  app.set_help_flag("--help", "Print help and exit");

  // ---- common option storage
  std::string matrix_path, measure = "ap", out_path, out_dir;
  std::string b_path, e_path, baseline_id, experimental_id, model_path;
  std::string tests_spec = "t,wilcoxon,sign,permutation,bootstrap";
  std::string alpha_grid = "0.01,0.05", delta_grid = "0.01:0.1:0.01";
  std::uint64_t seed = 0, replicas = 0;
  std::size_t n_topics = 50, trials = 2000, n_systems = 20;
  int tails = 2;
  unsigned threads = 0;
  double sign_h = 0.01, delta = 0.0;
  bool null_mode = false;
  bool has_delta = false;

  // ---- test
  auto* cmd_test = app.add_subcommand("test", "Run the paired tests");
  cmd_test->add_option("--b", b_path, "Baseline score file (one score per line)");
  cmd_test->add_option("--e", e_path, "Experimental score file");
  cmd_test->add_option("--matrix", matrix_path, "Score matrix CSV");
  cmd_test->add_option("--baseline", baseline_id, "Baseline system id");
  cmd_test->add_option("--experimental", experimental_id,
                       "Experimental system id");
  cmd_test->add_option("--measure", measure, "ap|ndcg|err|p10|rr");
  cmd_test->add_option("--tests", tests_spec, "Comma list of tests");
  cmd_test->add_option("--tails", tails, "1 or 2")->check(CLI::Range(1, 2));
  cmd_test->add_option("--replicas", replicas, "Resampling replica count T");
  cmd_test->add_option("--seed", seed, "Master seed (0 = random)");
  cmd_test->add_option("--h", sign_h, "Sign-test tie threshold");
  cmd_test->add_option("--out", out_path, "Optional CSV output path");

  // ---- fit
  auto* cmd_fit = app.add_subcommand("fit", "Fit a stochastic model");
  cmd_fit->add_option("--matrix", matrix_path, "Score matrix CSV")->required();
  cmd_fit->add_option("--measure", measure, "ap|ndcg|err|p10|rr");
  cmd_fit->add_option("--baseline", baseline_id, "Baseline system id")
      ->required();
  cmd_fit->add_option("--experimental", experimental_id,
                      "Experimental system id")
      ->required();
  cmd_fit->add_option("--out", out_path, "Model JSON output path")->required();
  cmd_fit->add_option("--seed", seed, "Master seed (0 = random)");

  // ---- simulate
  auto* cmd_sim = app.add_subcommand("simulate", "Simulate paired scores");
  cmd_sim->add_option("--model", model_path, "Model JSON path")->required();
  cmd_sim->add_option("--n-topics,--n", n_topics, "Topics to simulate");
  cmd_sim->add_option("--seed", seed, "Master seed (0 = random)");
  cmd_sim->add_flag("--null", null_mode, "Simulate under the null hypothesis");
  cmd_sim->add_option("--delta", delta, "Impose effect size delta");
  cmd_sim->add_option("--out", out_path, "Output CSV path");

  // ---- experiment
  auto* cmd_exp =
      app.add_subcommand("experiment", "Run an error-rate experiment");
  std::string mode_name;
  cmd_exp->add_option("mode", mode_name, "type1|power|type3")->required();
  cmd_exp->add_option("--matrix", matrix_path, "Score matrix CSV")->required();
  cmd_exp->add_option("--measure", measure, "ap|ndcg|err|p10|rr");
  cmd_exp->add_option("--n-topics", n_topics, "Simulated topics per trial");
  cmd_exp->add_option("--trials", trials, "Trials per grid point");
  cmd_exp->add_option("--alpha-grid", alpha_grid, "a:b:step or comma list");
  cmd_exp->add_option("--delta-grid", delta_grid, "a:b:step or comma list");
  cmd_exp->add_option("--tests", tests_spec, "Comma list of tests");
  cmd_exp->add_option("--tails", tails, "1 or 2")->check(CLI::Range(1, 2));
  cmd_exp->add_option("--replicas", replicas, "Resampling replica count T");
  cmd_exp->add_option("--seed", seed, "Master seed (0 = random)");
  cmd_exp->add_option("--h", sign_h, "Sign-test tie threshold");
  cmd_exp->add_option("--threads", threads, "Worker threads (0 = auto)");
  cmd_exp->add_option("--out", out_dir, "Output directory")->required();

  // ---- plot
  auto* cmd_plot = app.add_subcommand("plot", "Re-render a chart from a report");
  std::string report_path;
  cmd_plot->add_option("--report", report_path, "Report CSV path")->required();
  cmd_plot->add_option("--out", out_path, "SVG output path")->required();

  // ---- synth
  auto* cmd_synth =
      app.add_subcommand("synth", "Emit a synthetic score matrix");
  cmd_synth->add_option("--topics", n_topics, "Topic count");
  cmd_synth->add_option("--systems", n_systems, "System count");
  cmd_synth->add_option("--seed", seed, "Master seed (0 = random)");
  cmd_synth->add_option("--measure", measure, "ap|ndcg|err|p10|rr");
  cmd_synth->add_option("--out", out_path, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::uint64_t master_seed = resolve_seed(seed);
  std::cout << "master seed: " << master_seed << "\n";

  if (*cmd_test) {
    std::vector<double> b, e;
    if (!matrix_path.empty()) {
      const ScoreMatrix mat = load_score_matrix(matrix_path, measure);
      b = mat.column(mat.system_index(baseline_id));
      e = mat.column(mat.system_index(experimental_id));
    } else if (!b_path.empty() && !e_path.empty()) {
      b = load_score_vector(b_path);
      e = load_score_vector(e_path);
    } else {
      throw invalid_configuration_error(
          "test: give either --b/--e or --matrix with system ids");
    }
    const PairedSample sample = PairedSample::from_scores(b, e);
    const std::uint64_t t_replicas = replicas != 0 ? replicas : 1000000;
    std::vector<TestOutcome> outcomes;
    std::size_t ti = 0;
    for (TestId test : parse_tests(tests_spec)) {
      const std::uint64_t test_seed = derive_seed(master_seed, 3, ti++);
      switch (test) {
        case TestId::t: outcomes.push_back(t_test(sample)); break;
        case TestId::wilcoxon: outcomes.push_back(wilcoxon_test(sample)); break;
        case TestId::sign: outcomes.push_back(sign_test(sample, sign_h)); break;
        case TestId::permutation:
          outcomes.push_back(permutation_test(sample, t_replicas, test_seed));
          break;
        case TestId::bootstrap:
          outcomes.push_back(
              bootstrap_shift_test(sample, t_replicas, test_seed));
          break;
      }
    }
    print_outcomes(outcomes, out_path);
    return 0;
  }

  if (*cmd_fit) {
    const ScoreMatrix mat = load_score_matrix(matrix_path, measure);
    ModelFitReports reports;
    const StochasticModel model =
        fit_model(mat.column(mat.system_index(baseline_id)),
                  mat.column(mat.system_index(experimental_id)), mat.support(),
                  &reports);
    auto print_report = [](const std::string& what, const FitReport& r) {
      std::cout << what << ": selected " << r.selected
                << " (loglik " << format_double(r.loglik) << ")\n";
      for (const auto& [name, ll] : r.candidates) {
        std::cout << "  " << name << ": " << format_double(ll) << "\n";
      }
    };
    print_report("margin_b", reports.margin_b);
    print_report("margin_e", reports.margin_e);
    print_report("copula", reports.copula);
    std::cout << "mu_b=" << format_double(model.mu_b())
              << " mu_e=" << format_double(model.mu_e()) << "\n";
    write_text_file(out_path, model.to_json().dump(2) + "\n");
    return 0;
  }

  if (*cmd_sim) {
    StochasticModel model = StochasticModel::from_json(
        nlohmann::json::parse(read_text_file(model_path)));
    has_delta = cmd_sim->count("--delta") > 0;
    if (null_mode && has_delta) {
      throw invalid_configuration_error("simulate: --null excludes --delta");
    }
    if (null_mode) model = to_null(model);
    if (has_delta) model = with_effect(model, delta);
    const PairedSample sample = simulate(model, n_topics, master_seed);
    std::string csv = "# master_seed=" + std::to_string(master_seed) + "\n";
    csv += "# mode=" + model_mode_name(model.mode) +
           " delta=" + format_double(model.delta) +
           " mu_b=" + format_double(model.mu_b()) +
           " mu_e=" + format_double(model.mu_e()) + "\n";
    csv += "topic,b,e\n";
    for (std::size_t i = 0; i < sample.n; ++i) {
      csv += std::to_string(i + 1) + "," + format_double(sample.b[i]) + "," +
             format_double(sample.e[i]) + "\n";
    }
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      write_text_file(out_path, csv);
    }
    return 0;
  }

  if (*cmd_exp) {
    ExperimentConfig config;
    config.mode = experiment_mode_from_name(mode_name);
    config.n_topics = n_topics;
    config.trials = trials;
    config.alphas = parse_grid(alpha_grid);
    if (config.mode != ExperimentMode::type1) {
      config.deltas = parse_grid(delta_grid);
    }
    config.tests = parse_tests(tests_spec);
    config.tails = tails;
    config.replicas = replicas != 0 ? replicas : 10000;
    config.master_seed = master_seed;
    config.sign_h = sign_h;
    config.threads = threads;

    const ScoreMatrix mat = load_score_matrix(matrix_path, measure);
    ExperimentResult result;
    switch (config.mode) {
      case ExperimentMode::type1: result = run_type1(config, mat); break;
      case ExperimentMode::power: result = run_power(config, mat); break;
      case ExperimentMode::type3: result = run_type3(config, mat); break;
    }
    fs::create_directories(out_dir);
    const std::string base = experiment_mode_name(config.mode);
    write_text_file(out_dir + "/" + base + "_report.csv", report_csv(result));
    write_text_file(out_dir + "/" + base + "_trials.csv",
                    trial_log_csv(result));
    write_text_file(out_dir + "/" + base + "_chart.svg",
                    report_chart_svg(result.config, result.rows));
    std::cout << "wrote " << out_dir << "/" << base << "_{report,trials}.csv"
              << " and " << base << "_chart.svg\n";
    return 0;
  }

  if (*cmd_plot) {
    const std::vector<ReportRow> rows = load_report_csv(report_path);
    bool has_deltas = false;
    for (const auto& r : rows) has_deltas = has_deltas || r.delta.has_value();
    ExperimentConfig config;
    config.mode = has_deltas ? ExperimentMode::power : ExperimentMode::type1;
    config.master_seed = master_seed;
    config.tests.clear();
    config.alphas.clear();
    config.deltas.clear();
    if (!rows.empty()) config.n_topics = rows.front().n_topics;
    for (const auto& r : rows) {
      const TestId id = test_from_name(r.test);
      if (std::find(config.tests.begin(), config.tests.end(), id) ==
          config.tests.end()) {
        config.tests.push_back(id);
      }
      if (std::find(config.alphas.begin(), config.alphas.end(), r.alpha) ==
          config.alphas.end()) {
        config.alphas.push_back(r.alpha);
      }
      if (r.delta && std::find(config.deltas.begin(), config.deltas.end(),
                               *r.delta) == config.deltas.end()) {
        config.deltas.push_back(*r.delta);
      }
    }
    write_text_file(out_path, report_chart_svg(config, rows));
    return 0;
  }

  if (*cmd_synth) {
    const ScoreMatrix mat = synth_matrix(n_topics, n_systems, master_seed,
                                         measure);
    write_text_file(out_path,
                    score_matrix_csv(
                        mat, {"master_seed=" + std::to_string(master_seed),
                              "measure=" + measure,
                              "topics=" + std::to_string(n_topics) +
                                  " systems=" + std::to_string(n_systems)}));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const invalid_configuration_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const invalid_argument_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_failure_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const unreachable_mean_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
