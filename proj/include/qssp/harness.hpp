#pragma once

#include "qssp/capacity.hpp"
#include "qssp/channel.hpp"
#include "qssp/orbital.hpp"
#include "qssp/scheduler.hpp"
#include "qssp/topology.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qssp::harness {

struct TleSource {
  std::filesystem::path path;
};
struct WalkerSource {
  int planes = 1;
  int sats_per_plane = 1;
  double inclination_deg = 53.0;
  double altitude_m = 550e3;
  int phasing = 0;
};
struct EphemerisSource {
  std::filesystem::path path;
};
using ConstellationSource = std::variant<TleSource, WalkerSource, EphemerisSource>;

struct RandomOnLand {
  std::uint64_t seed = 0;
  std::filesystem::path land_mask;
};
struct PopulationCenters {
  std::filesystem::path dataset;
};
using Placement = std::variant<RandomOnLand, PopulationCenters>;

/// Mirrors the scenario JSON document; see README for the field list.
struct ScenarioConfig {
  ConstellationSource constellation = WalkerSource{};
  Placement placement = PopulationCenters{};
  int station_count = 100;
  Capacity receivers{1};
  Capacity default_L{1};
  std::int64_t transmitters_per_satellite = 1;
  double max_pair_distance_m = 2'250'000.0;
  std::optional<std::set<std::string>> pair_allowlist;
  orbital::TimeGrid time_grid;
  channel::ChannelParams channel;
  scheduler::SolverKind solver = scheduler::SolverKind::GreedyBackoff;
  std::uint64_t solver_seed = 0;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0: one per hardware thread

  /// Relative paths resolve against `base_dir`. Throws qssp::ConfigError.
  static ScenarioConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  /// Throws qssp::ConfigError when the file is missing or malformed.
  static ScenarioConfig load(const std::filesystem::path& path);
};

struct AssignedConnection {
  std::string satellite_id;
  std::string pair_id;
  std::int64_t x = 0;
  double weight = 0.0;
  std::optional<double> fidelity;
  bool is_day = false;
};

struct SlotResult {
  int slot = 0;
  double unix_time = 0.0;
  std::vector<AssignedConnection> connections;  // sorted by (satellite_id, pair_id)
  double aggregate_rate = 0.0;                  // sum of w_ij x_ij
  std::optional<double> mean_fidelity;          // rate-weighted
  std::int64_t num_connections = 0;             // sum of x_ij
  std::vector<std::int64_t> connections_per_station;  // parallel to MetricsSeries::stations
  int max_sats_per_pair = 0;
  int max_pairs_per_sat = 0;
  // Rate mass and rate-weighted fidelity mass, split by day/night.
  double day_rate = 0.0;
  double day_fidelity_mass = 0.0;
  double night_rate = 0.0;
  double night_fidelity_mass = 0.0;
};

using LongevityHistogram = std::map<int, std::int64_t>;

struct MetricsSeries {
  std::string solver;
  std::vector<topology::GroundStation> stations;
  std::vector<SlotResult> slots;
  LongevityHistogram longevity;
  std::vector<double> per_station_mean_connections;
  std::optional<double> day_fidelity;
  std::optional<double> night_fidelity;
};

/// Connections (satellite_id, pair_id) with x >= 1 in one slot.
using SlotConnections = std::set<std::pair<std::string, std::string>>;

/// Histogram of maximal runs of consecutive slots holding the same connection.
LongevityHistogram longevity_histogram(const std::vector<SlotConnections>& slots);

struct Summary {
  std::size_t slot_count = 0;
  double mean_rate = 0.0;
  std::optional<double> mean_fidelity;
  std::optional<double> day_fidelity;
  std::optional<double> night_fidelity;
  double day_rate_mass = 0.0;
  double night_rate_mass = 0.0;
  double day_fidelity_mass = 0.0;
  double night_fidelity_mass = 0.0;
  std::vector<double> per_station_mean_connections;
  std::vector<int> max_sats_per_pair;
  std::vector<int> max_pairs_per_sat;
};

/// Throws std::invalid_argument for an empty series.
Summary aggregate_metrics(const MetricsSeries& series);

/// Builds the slot's QSSP instance from a visibility snapshot.
scheduler::QsspInstance build_instance(const topology::VisibilitySnapshot& snap,
                                       const std::vector<topology::GroundStation>& stations,
                                       const std::vector<topology::StationPair>& pairs,
                                       std::int64_t transmitters_per_satellite);

/// Per slot: propagate, classify day/night, snapshot, solve, record.
/// Deterministic for a fixed config. Throws IoError/ParseError on unreadable
/// inputs and SolverRefusal (naming the slot) when the exact solver declines.
MetricsSeries run_scenario(const ScenarioConfig& cfg);

/// Writes per_slot.csv, assignments.csv, longevity.csv and stations.csv.
void export_csv(const MetricsSeries& series, const std::filesystem::path& dir);

}  // namespace qssp::harness
