// qssp: command-line front end for the satellite entanglement scheduler.
//
// Exit codes: 0 success, 2 configuration/input error, 3 I/O error,
// 4 exact-solver refusal.

#include "qssp/error.hpp"
#include "qssp/harness.hpp"
#include "qssp/io.hpp"
#include "qssp/orbital.hpp"
#include "qssp/scheduler.hpp"
#include "qssp/serialization.hpp"
#include "qssp/topology.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitRefusal = 4;

qssp::scheduler::SolverKind solver_or_throw(const std::string& name) {
  const auto kind = qssp::scheduler::parse_solver(name);
  if (!kind) throw qssp::ConfigError("unknown solver '" + name + "'");
  return *kind;
}

qssp::Capacity capacity_arg(const std::string& text) {
  if (text == "unbounded") return qssp::Capacity::unbounded();
  const auto v = qssp::text::parse_int(text);
  if (v < 0) throw qssp::ConfigError("capacity must be >= 0 or 'unbounded'");
  return qssp::Capacity{v};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    qssp::write_text_file(out_path, text);
  }
}

qssp::serialization::json read_json(const std::string& path) {
  return qssp::serialization::parse(qssp::read_text_file(path));
}

struct RunArgs {
  std::string config;
  std::string solver;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  auto cfg = qssp::harness::ScenarioConfig::load(a.config);
  if (!a.solver.empty()) cfg.solver = solver_or_throw(a.solver);
  if (!a.out.empty()) cfg.output_dir = a.out;
  const auto series = qssp::harness::run_scenario(cfg);
  qssp::harness::export_csv(series, cfg.output_dir);
  const auto summary = qssp::harness::aggregate_metrics(series);
  std::cerr << "qssp run: " << summary.slot_count << " slots, solver " << series.solver
            << ", mean rate " << qssp::text::format_double(summary.mean_rate) << " ebits/s, output in "
            << cfg.output_dir.string() << '\n';
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string solver = "greedy_backoff";
  std::uint64_t seed = 0;
};

int cmd_solve_once(const SolveArgs& a) {
  const auto inst = qssp::serialization::instance_from_json(read_json(a.instance));
  const auto assignment = qssp::scheduler::solve(inst, solver_or_throw(a.solver), a.seed);
  std::cout << qssp::serialization::to_json(inst, assignment).dump(2) << '\n';
  return 0;
}

int cmd_reduce_3dm(const std::string& hypergraph) {
  const auto h = qssp::serialization::hypergraph_from_json(read_json(hypergraph));
  const auto r = qssp::scheduler::reduce_3dm_to_qssp(h);
  std::cout << qssp::serialization::to_json(h, r).dump(2) << '\n';
  return 0;
}

struct PlaceArgs {
  std::string method;
  int count = 100;
  std::uint64_t seed = 0;
  std::string mask;
  std::string dataset;
  std::string receivers = "1";
  std::string out;
};

int cmd_place(const PlaceArgs& a) {
  const auto receivers = capacity_arg(a.receivers);
  std::vector<qssp::topology::GroundStation> stations;
  if (a.method == "random") {
    if (a.mask.empty()) throw qssp::ConfigError("--method random needs --mask");
    stations = qssp::topology::place_random_on_land(a.count, a.seed, qssp::topology::LandMask::load(a.mask),
                                                    receivers);
  } else {
    if (a.dataset.empty()) throw qssp::ConfigError("--method population needs --dataset");
    stations = qssp::topology::place_population_centers(a.count, qssp::read_text_file(a.dataset), receivers);
  }
  std::ostringstream csv;
  csv << "station_id,lat_deg,lon_deg,receivers\n";
  for (const auto& s : stations) {
    csv << s.id << ',' << qssp::text::format_double(s.location.latitude_deg) << ','
        << qssp::text::format_double(s.location.longitude_deg) << ',' << s.receivers.to_string() << '\n';
  }
  emit(csv.str(), a.out);
  return 0;
}

struct WalkerArgs {
  int planes = 12;
  int sats_per_plane = 18;
  double inclination_deg = 53.0;
  double altitude_m = 550e3;
  int phasing = 0;
  std::string epoch = "2023-09-23T00:00:00Z";
  std::string out;
};

int cmd_gen_walker(const WalkerArgs& a) {
  const auto epoch = qssp::orbital::parse_utc(a.epoch);
  const auto elements = qssp::orbital::generate_walker_constellation(
      a.planes, a.sats_per_plane, a.inclination_deg, a.altitude_m, a.phasing, epoch);
  std::string text;
  int catalog = 1;
  for (const auto& el : elements) text += qssp::orbital::format_tle(el, catalog++);
  emit(text, a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-distribution scheduling for LEO satellite constellations"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write per_slot, assignments, longevity and stations CSVs");
  run_cmd->add_option("--config", run.config, "Scenario JSON file")->required();
  run_cmd->add_option("--solver", run.solver, "Override the configured solver");
  run_cmd->add_option("--out", run.out, "Override the configured output directory");

  PlaceArgs place;
  auto* place_cmd = app.add_subcommand("place", "Place ground stations and print them as CSV");
  place_cmd->add_option("--method", place.method, "random or population")
      ->required()
      ->check(CLI::IsMember({"random", "population"}));
  place_cmd->add_option("--count", place.count, "Number of stations")->check(CLI::PositiveNumber);
  place_cmd->add_option("--seed", place.seed, "Seed for random placement");
  place_cmd->add_option("--mask", place.mask, "1-degree land mask (random placement)");
  place_cmd->add_option("--dataset", place.dataset, "Population-center CSV (population placement)");
  place_cmd->add_option("--receivers", place.receivers, "Receivers per station, or 'unbounded'");
  place_cmd->add_option("--out", place.out, "Write to this file instead of standard output");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve-once", "Solve one instance and print the assignment JSON");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON file")->required();
  solve_cmd->add_option("--solver", solve.solver,
                        "random, local_greedy, global_greedy, greedy_backoff or exact");
  solve_cmd->add_option("--seed", solve.seed, "Seed for the randomized solvers");

  WalkerArgs walker;
  auto* walker_cmd = app.add_subcommand("gen-walker", "Generate a Walker-delta shell as TLE records");
  walker_cmd->add_option("--planes", walker.planes, "Orbital planes")->check(CLI::PositiveNumber);
  walker_cmd->add_option("--sats-per-plane", walker.sats_per_plane, "Satellites per plane")
      ->check(CLI::PositiveNumber);
  walker_cmd->add_option("--inclination-deg", walker.inclination_deg, "Inclination in degrees");
  walker_cmd->add_option("--altitude-m", walker.altitude_m, "Altitude above the mean sphere in meters");
  walker_cmd->add_option("--phasing", walker.phasing, "Walker phasing factor");
  walker_cmd->add_option("--epoch", walker.epoch, "UTC epoch, YYYY-MM-DDTHH:MM:SSZ");
  walker_cmd->add_option("--out", walker.out, "Write to this file instead of standard output");

  std::string hypergraph;
  auto* reduce_cmd = app.add_subcommand("reduce-3dm", "Reduce a 3-dimensional matching instance to QSSP");
  reduce_cmd->add_option("--hypergraph", hypergraph, "Hypergraph JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*place_cmd) return cmd_place(place);
    if (*solve_cmd) return cmd_solve_once(solve);
    if (*walker_cmd) return cmd_gen_walker(walker);
    if (*reduce_cmd) return cmd_reduce_3dm(hypergraph);
  } catch (const qssp::SolverRefusal& e) {
    std::cerr << "qssp: solver refused: " << e.what() << '\n';
    return kExitRefusal;
  } catch (const qssp::IoError& e) {
    std::cerr << "qssp: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qssp::ConfigError& e) {
    std::cerr << "qssp: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qssp::ParseError& e) {
    std::cerr << "qssp: parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qssp: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qssp: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
