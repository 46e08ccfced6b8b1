#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsmab/adwin.hpp"
#include "nsmab/environments.hpp"
#include "nsmab/harness.hpp"
#include "nsmab/stats.hpp"

namespace py = pybind11;

namespace {

nsmab::ExperimentConfig config_from_args(const std::string& env,
                                         const std::string& policy, int K,
                                         std::int64_t T, int L, int runs,
                                         std::uint64_t seed, double delta,
                                         const std::map<std::string, double>& params,
                                         std::int64_t cadence, int threads) {
  nsmab::ExperimentConfig config;
  config.env = env;
  config.policy = policy;
  config.num_arms = K;
  config.horizon = T;
  config.plays = L;
  config.runs = runs;
  config.base_seed = seed;
  config.delta = delta;
  config.params = params;
  config.cadence = cadence;
  config.threads = threads;
  return config;
}

py::list records_to_python(const std::vector<nsmab::RunRecord>& records) {
  py::list out;
  for (const auto& record : records) {
    py::dict d;
    d["run"] = record.run;
    d["metric"] = record.metric;
    py::list rows;
    for (const auto& row : record.rows) {
      rows.append(py::make_tuple(row.t, row.value, row.resets));
    }
    d["rows"] = rows;
    d["final_value"] = record.final_value;
    d["final_resets"] = record.final_resets;
    d["reset_rounds"] = record.reset_rounds;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adaptive-windowing change detection and nonstationary bandits";

  m.def("epsilon_cut", &nsmab::epsilon_cut, py::arg("n1"), py::arg("n2"),
        py::arg("delta"),
        "Two-sided Hoeffding cut threshold for a window split");
  m.def("kl_bernoulli", &nsmab::kl_bernoulli, py::arg("p"), py::arg("q"));
  m.def("kl_ucb_index", &nsmab::kl_ucb_index, py::arg("mu_hat"), py::arg("n"),
        py::arg("t"));
  m.def(
      "top_l",
      [](const std::vector<double>& scores, int l) {
        return nsmab::top_l(scores, l);
      },
      py::arg("scores"), py::arg("l"),
      "Indices of the l largest scores, ties to the smaller index");
  m.def(
      "regret_step",
      [](const std::vector<double>& means, const std::vector<int>& selection) {
        return nsmab::regret_step(means, selection);
      },
      py::arg("oracle_means"), py::arg("selection"));

  py::class_<nsmab::DetectionReport>(m, "DetectionReport")
      .def_readonly("detected", &nsmab::DetectionReport::detected)
      .def_readonly("breakpoint", &nsmab::DetectionReport::breakpoint)
      .def_readonly("retained_size", &nsmab::DetectionReport::retained_size);

  py::class_<nsmab::AdwinDetector>(m, "AdwinDetector")
      .def(py::init<double, std::int64_t, std::optional<std::int64_t>>(),
           py::arg("delta"), py::arg("check_stride") = 1,
           py::arg("horizon") = std::nullopt)
      .def("observe", &nsmab::AdwinDetector::observe, py::arg("x"))
      .def("would_detect", &nsmab::AdwinDetector::would_detect)
      .def("mean_estimate", &nsmab::AdwinDetector::mean_estimate)
      .def_property_readonly("window_size", &nsmab::AdwinDetector::window_size)
      .def_property_readonly("window_start", &nsmab::AdwinDetector::window_start)
      .def_property_readonly("rounds_seen", &nsmab::AdwinDetector::rounds_seen);

  py::class_<nsmab::SyntheticEnv>(m, "SyntheticEnv")
      .def(py::init([](const std::string& kind, int K, std::int64_t T) {
             return nsmab::SyntheticEnv(nsmab::parse_env_kind(kind), K, T);
           }),
           py::arg("kind"), py::arg("num_arms"), py::arg("horizon"))
      .def("mean", &nsmab::SyntheticEnv::mean, py::arg("arm"), py::arg("t"))
      .def("changepoints", &nsmab::SyntheticEnv::changepoints)
      .def_property_readonly("num_arms", &nsmab::SyntheticEnv::num_arms)
      .def_property_readonly("horizon", &nsmab::SyntheticEnv::horizon)
      .def_property_readonly("kind", [](const nsmab::SyntheticEnv& env) {
        return nsmab::env_kind_name(env.kind());
      });

  py::class_<nsmab::ChangeRatio>(m, "ChangeRatio")
      .def_readonly("applicable", &nsmab::ChangeRatio::applicable)
      .def_readonly("excluding_zero", &nsmab::ChangeRatio::excluding_zero)
      .def_readonly("including_zero", &nsmab::ChangeRatio::including_zero);

  m.def("global_change_ratio", &nsmab::global_change_ratio, py::arg("env"));
  m.def("gradual_ratio", &nsmab::gradual_ratio, py::arg("env"));

  m.def(
      "simulate",
      [](const std::string& env, const std::string& policy, int K,
         std::int64_t T, int L, int runs, std::uint64_t seed, double delta,
         const std::map<std::string, double>& params, std::int64_t cadence,
         int threads) {
        const auto records = nsmab::run_experiment(config_from_args(
            env, policy, K, T, L, runs, seed, delta, params, cadence, threads));
        return records_to_python(records);
      },
      py::arg("env"), py::arg("policy"), py::arg("K") = 100,
      py::arg("T") = 30000, py::arg("L") = 1, py::arg("runs") = 1,
      py::arg("seed") = 1, py::arg("delta") = 0.001,
      py::arg("params") = std::map<std::string, double>{},
      py::arg("cadence") = 0, py::arg("threads") = 0,
      "Run seeded experiments; returns one dict per run");

  m.def(
      "generate_replay_log",
      [](const std::string& path, const std::string& kind, int K,
         std::int64_t T, std::int64_t events, std::uint64_t seed) {
        nsmab::Rng rng(seed);
        const nsmab::SyntheticEnv env(nsmab::parse_env_kind(kind), K, T);
        nsmab::make_uniform_replay_log(env, events, rng).save(path);
      },
      py::arg("path"), py::arg("kind"), py::arg("K"), py::arg("T"),
      py::arg("events"), py::arg("seed") = 1,
      "Write a synthetic uniform-presentation replay log CSV");
}
