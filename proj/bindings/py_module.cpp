#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "sigtestsim/errors.hpp"
#include "sigtestsim/experiments.hpp"
#include "sigtestsim/io.hpp"
#include "sigtestsim/simulation.hpp"

namespace py = pybind11;
using namespace sigtestsim;

namespace {

PairedSample make_sample(const std::vector<double>& b,
                         const std::vector<double>& e) {
  return PairedSample::from_scores(b, e);
}

py::dict outcome_dict(const TestOutcome& o) {
  py::dict d;
  d["test"] = test_name(o.test_id);
  d["statistic"] = o.statistic;
  d["p1"] = o.p1;
  d["p2"] = o.p2;
  if (o.replicas) d["replicas"] = *o.replicas;
  if (o.seed) d["seed"] = *o.seed;
  return d;
}

ScoreMatrix matrix_from_py(const std::vector<std::vector<double>>& scores,
                           const std::string& measure) {
  ScoreMatrix m;
  m.measure = measure;
  if (scores.empty() || scores[0].empty()) {
    throw invalid_data_error("score matrix must be non-empty");
  }
  for (std::size_t t = 0; t < scores.size(); ++t) {
    m.topics.push_back("t" + std::to_string(t + 1));
  }
  for (std::size_t s = 0; s < scores[0].size(); ++s) {
    m.systems.push_back("s" + std::to_string(s + 1));
  }
  m.scores = scores;
  return m;
}

}  // namespace

PYBIND11_MODULE(_sigtestsim, m) {
  m.doc() = "Paired significance tests and copula-based simulation of "
            "paired evaluation scores";

  py::register_exception<error>(m, "SigtestsimError");

  m.def("t_test",
        [](const std::vector<double>& b, const std::vector<double>& e) {
          return outcome_dict(t_test(make_sample(b, e)));
        },
        py::arg("b"), py::arg("e"));
  m.def("wilcoxon_test",
        [](const std::vector<double>& b, const std::vector<double>& e) {
          return outcome_dict(wilcoxon_test(make_sample(b, e)));
        },
        py::arg("b"), py::arg("e"));
  m.def("sign_test",
        [](const std::vector<double>& b, const std::vector<double>& e,
           double h) { return outcome_dict(sign_test(make_sample(b, e), h)); },
        py::arg("b"), py::arg("e"), py::arg("h") = 0.01);
  m.def("permutation_test",
        [](const std::vector<double>& b, const std::vector<double>& e,
           std::uint64_t replicas, std::uint64_t seed) {
          return outcome_dict(
              permutation_test(make_sample(b, e), replicas, seed));
        },
        py::arg("b"), py::arg("e"), py::arg("replicas") = 1000000,
        py::arg("seed") = 1);
  m.def("bootstrap_shift_test",
        [](const std::vector<double>& b, const std::vector<double>& e,
           std::uint64_t replicas, std::uint64_t seed) {
          return outcome_dict(
              bootstrap_shift_test(make_sample(b, e), replicas, seed));
        },
        py::arg("b"), py::arg("e"), py::arg("replicas") = 1000000,
        py::arg("seed") = 1);
  m.def("exact_permutation_p",
        [](const std::vector<double>& b, const std::vector<double>& e) {
          const ExactP p = exact_permutation_p(make_sample(b, e));
          return py::make_tuple(p.p1, p.p2);
        },
        py::arg("b"), py::arg("e"));
  m.def("required_replicas", &required_replicas, py::arg("p_target"),
        py::arg("epsilon"));

  py::class_<StochasticModel>(m, "StochasticModel")
      .def_static("fit",
                  [](const std::vector<double>& b, const std::vector<double>& e,
                     const std::string& measure) {
                    return fit_model(b, e, SupportHint::for_measure(measure));
                  },
                  py::arg("b"), py::arg("e"), py::arg("measure") = "ap")
      .def_static("from_json",
                  [](const std::string& text) {
                    return StochasticModel::from_json(nlohmann::json::parse(text));
                  })
      .def("to_null", [](const StochasticModel& m) { return to_null(m); })
      .def("with_effect",
           [](const StochasticModel& m, double delta) {
             return with_effect(m, delta);
           },
           py::arg("delta"))
      .def("simulate",
           [](const StochasticModel& m, std::size_t n, std::uint64_t seed) {
             const PairedSample s = simulate(m, n, seed);
             return py::make_tuple(s.b, s.e);
           },
           py::arg("n"), py::arg("seed"))
      .def("to_json",
           [](const StochasticModel& m) { return m.to_json().dump(); })
      .def_property_readonly("mu_b", &StochasticModel::mu_b)
      .def_property_readonly("mu_e", &StochasticModel::mu_e)
      .def_property_readonly("delta",
                             [](const StochasticModel& m) { return m.delta; })
      .def_property_readonly("mode", [](const StochasticModel& m) {
        return model_mode_name(m.mode);
      });

  m.def("synth_matrix",
        [](std::size_t n_topics, std::size_t n_systems, std::uint64_t seed,
           const std::string& measure) {
          const ScoreMatrix mat = synth_matrix(n_topics, n_systems, seed,
                                               measure);
          py::dict d;
          d["topics"] = mat.topics;
          d["systems"] = mat.systems;
          d["scores"] = mat.scores;
          d["measure"] = mat.measure;
          return d;
        },
        py::arg("n_topics"), py::arg("n_systems"), py::arg("seed"),
        py::arg("measure") = "ap");

  m.def("run_experiment",
        [](const std::string& mode, const std::vector<std::vector<double>>& scores,
           const std::string& measure, std::size_t n_topics, std::size_t trials,
           const std::vector<double>& alphas, const std::vector<double>& deltas,
           const std::vector<std::string>& tests, int tails,
           std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
          ExperimentConfig config;
          config.mode = experiment_mode_from_name(mode);
          config.n_topics = n_topics;
          config.trials = trials;
          config.alphas = alphas;
          config.deltas = deltas;
          config.tests.clear();
          for (const auto& t : tests) config.tests.push_back(test_from_name(t));
          config.tails = tails;
          config.replicas = replicas;
          config.master_seed = seed;
          config.threads = threads;
          const ScoreMatrix mat = matrix_from_py(scores, measure);
          ExperimentResult result;
          switch (config.mode) {
            case ExperimentMode::type1: result = run_type1(config, mat); break;
            case ExperimentMode::power: result = run_power(config, mat); break;
            case ExperimentMode::type3: result = run_type3(config, mat); break;
          }
          py::list rows;
          for (const ReportRow& row : result.rows) {
            py::dict d;
            d["test"] = row.test;
            d["n"] = row.n_topics;
            d["alpha"] = row.alpha;
            if (row.delta) d["delta"] = *row.delta;
            d["trials"] = row.trials;
            d["rejections"] = row.rejections;
            d["rate"] = row.rate();
            rows.append(d);
          }
          return rows;
        },
        py::arg("mode"), py::arg("scores"), py::arg("measure") = "ap",
        py::arg("n_topics") = 50, py::arg("trials") = 200,
        py::arg("alphas") = std::vector<double>{0.05},
        py::arg("deltas") = std::vector<double>{},
        py::arg("tests") = std::vector<std::string>{"t"}, py::arg("tails") = 2,
        py::arg("replicas") = 10000, py::arg("seed") = 1,
        py::arg("threads") = 0);
}
