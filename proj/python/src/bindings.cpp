// JSON-string bridge to the C++ core; python/qssp/__init__.py wraps it.

#include "qssp/channel.hpp"
#include "qssp/error.hpp"
#include "qssp/harness.hpp"
#include "qssp/orbital.hpp"
#include "qssp/scheduler.hpp"
#include "qssp/serialization.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
namespace ser = qssp::serialization;

namespace {

qssp::scheduler::SolverKind solver_kind(const std::string& name) {
  const auto kind = qssp::scheduler::parse_solver(name);
  if (!kind) throw qssp::ConfigError("unknown solver '" + name + "'");
  return *kind;
}

std::string solve(const std::string& instance_json, const std::string& solver, std::uint64_t seed) {
  const auto inst = ser::instance_from_json(ser::parse(instance_json));
  std::optional<qssp::scheduler::Assignment> a;
  const auto kind = solver_kind(solver);
  {
    py::gil_scoped_release release;
    a = qssp::scheduler::solve(inst, kind, seed);
  }
  return ser::to_json(inst, *a).dump();
}

std::string reduce_3dm(const std::string& hypergraph_json) {
  const auto h = ser::hypergraph_from_json(ser::parse(hypergraph_json));
  return ser::to_json(h, qssp::scheduler::reduce_3dm_to_qssp(h)).dump();
}

int brute_force_3dm(const std::string& hypergraph_json) {
  return qssp::scheduler::brute_force_3dm(ser::hypergraph_from_json(ser::parse(hypergraph_json)));
}

std::string run_scenario(const std::string& config_path, std::optional<std::string> solver,
                         std::optional<std::string> out_dir) {
  auto cfg = qssp::harness::ScenarioConfig::load(config_path);
  if (solver) cfg.solver = solver_kind(*solver);
  if (out_dir) cfg.output_dir = *out_dir;
  qssp::harness::MetricsSeries series;
  {
    py::gil_scoped_release release;
    series = qssp::harness::run_scenario(cfg);
    qssp::harness::export_csv(series, cfg.output_dir);
  }
  const auto s = qssp::harness::aggregate_metrics(series);
  auto opt = [](const std::optional<double>& v) { return v ? ser::json(*v) : ser::json(nullptr); };
  ser::json longevity = ser::json::object();
  for (const auto& [len, count] : series.longevity) longevity[std::to_string(len)] = count;
  return ser::json{{"solver", series.solver},
                   {"slot_count", s.slot_count},
                   {"mean_rate", s.mean_rate},
                   {"mean_fidelity", opt(s.mean_fidelity)},
                   {"day_fidelity", opt(s.day_fidelity)},
                   {"night_fidelity", opt(s.night_fidelity)},
                   {"longevity", longevity},
                   {"output_dir", cfg.output_dir.string()}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the qssp package";

  py::register_exception<qssp::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<qssp::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<qssp::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<qssp::SolverRefusal>(m, "SolverRefusal", PyExc_RuntimeError);

  m.def("solve", &solve, py::arg("instance_json"), py::arg("solver") = "greedy_backoff", py::arg("seed") = 0);
  m.def("reduce_3dm", &reduce_3dm, py::arg("hypergraph_json"));
  m.def("brute_force_3dm", &brute_force_3dm, py::arg("hypergraph_json"));
  m.def("run_scenario", &run_scenario, py::arg("config_path"), py::arg("solver") = py::none(),
        py::arg("out_dir") = py::none());
  m.def("photon_number_dist", &qssp::channel::photon_number_dist, py::arg("pump_power"), py::arg("n"));
  m.def("footprint_radius", &qssp::orbital::footprint_radius, py::arg("altitude_m"),
        py::arg("min_elevation_deg"));
}
