#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcomb/combiner.hpp"
#include "bcomb/harness/experiment.hpp"

namespace py = pybind11;
using namespace bcomb;

namespace {

// Configs and metadata cross the boundary as JSON text; the Python package
// decodes them with the json module.
py::dict run_config(const std::string& config_json) {
  const ExperimentConfig cfg = parse_experiment_config(nlohmann::json::parse(config_json));
  ExperimentResult res;
  {
    py::gil_scoped_release release;
    res = run_experiment(cfg);
  }
  py::dict regrets;
  for (const auto& p : res.policies) {
    const auto reps = static_cast<py::ssize_t>(p.reps.size());
    const auto T = static_cast<py::ssize_t>(reps ? p.reps.front().rows.size() : 0);
    py::array_t<double> a({reps, T});
    auto m = a.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < reps; ++r)
      for (py::ssize_t t = 0; t < T; ++t) m(r, t) = p.reps[r].rows[t].cum_regret;
    regrets[py::str(p.name)] = a;
  }
  py::dict out;
  out["cum_regret"] = regrets;
  out["metadata"] = res.metadata.dump();
  return out;
}

void run_to_dir(const std::string& config_json, const std::string& out_dir) {
  const ExperimentConfig cfg = parse_experiment_config(nlohmann::json::parse(config_json));
  py::gil_scoped_release release;
  write_experiment(run_experiment(cfg), out_dir);
}

std::string preset_json(const std::string& name, double alpha_mix) {
  return to_json(preset_config(name, alpha_mix)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<PutativeBound>(m, "PutativeBound")
      .def(py::init([](double C, double alpha) { return PutativeBound{C, alpha}; }), py::arg("C"), py::arg("alpha"))
      .def_readwrite("C", &PutativeBound::C)
      .def_readwrite("alpha", &PutativeBound::alpha)
      .def("at", &PutativeBound::at, py::arg("t"));

  m.def("log_term", &log_term, py::arg("horizon"), py::arg("n_bases"), py::arg("delta"));
  m.def("alphabound_sup", &alphabound_sup, py::arg("A"), py::arg("B"), py::arg("alpha"));
  m.def(
      "target_regrets_from_eta",
      [](const std::vector<PutativeBound>& bounds, const std::vector<double>& etas, std::size_t horizon,
         double delta) { return target_regrets_from_eta(bounds, EtaPrior{etas}, horizon, delta); },
      py::arg("bounds"), py::arg("etas"), py::arg("horizon"), py::arg("delta"));
  m.def("target_regrets_experiment", &target_regrets_experiment, py::arg("bounds"), py::arg("horizon"));
  m.def(
      "check_target_regret_conditions",
      [](const std::vector<PutativeBound>& bounds, const std::vector<double>& targets, std::size_t horizon,
         double delta) {
        CombinerConfig cfg;
        cfg.bounds = bounds;
        cfg.targets = targets;
        cfg.horizon = horizon;
        cfg.delta = delta;
        return check_target_regret_conditions(cfg);
      },
      py::arg("bounds"), py::arg("targets"), py::arg("horizon"), py::arg("delta"));
  m.def("preset_json", &preset_json, py::arg("name"), py::arg("alpha_mix") = 0.0);
  m.def("preset_names", &preset_names);
  m.def("config_hash", [](const std::string& j) { return config_hash(parse_experiment_config(nlohmann::json::parse(j))); },
        py::arg("config_json"));
  m.def("run_config", &run_config, py::arg("config_json"));
  m.def("run_to_dir", &run_to_dir, py::arg("config_json"), py::arg("out_dir"));
  m.attr("__version__") = library_version();
}
