#include "qssp/harness.hpp"

#include "qssp/error.hpp"
#include "qssp/io.hpp"
#include "qssp/rng.hpp"
#include "qssp/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

namespace qssp::harness {

using nlohmann::json;

// --- config -----------------------------------------------------------------

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' is missing or has the wrong type");
  }
}

ConstellationSource parse_constellation(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError("'constellation' must hold exactly one of 'tle', 'walker', 'ephemeris'");
  }
  if (j.contains("tle")) return TleSource{resolve(base, get_as<std::string>(j, "tle"))};
  if (j.contains("ephemeris")) return EphemerisSource{resolve(base, get_as<std::string>(j, "ephemeris"))};
  if (j.contains("walker")) {
    const auto& w = j.at("walker");
    WalkerSource s;
    s.planes = get_as<int>(w, "planes");
    s.sats_per_plane = get_as<int>(w, "sats_per_plane");
    s.inclination_deg = get_as<double>(w, "inclination_deg");
    s.altitude_m = get_as<double>(w, "altitude_m");
    s.phasing = w.contains("phasing") ? get_as<int>(w, "phasing") : 0;
    if (s.planes < 1 || s.sats_per_plane < 1) throw ConfigError("walker shell needs planes, sats >= 1");
    return s;
  }
  throw ConfigError("'constellation' must hold exactly one of 'tle', 'walker', 'ephemeris'");
}

Placement parse_placement(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError("'placement' must hold exactly one of 'random_on_land', 'population_centers'");
  }
  if (j.contains("population_centers")) {
    return PopulationCenters{resolve(base, get_as<std::string>(j, "population_centers"))};
  }
  if (j.contains("random_on_land")) {
    const auto& r = j.at("random_on_land");
    return RandomOnLand{get_as<std::uint64_t>(r, "seed"),
                        resolve(base, get_as<std::string>(r, "land_mask"))};
  }
  throw ConfigError("'placement' must hold exactly one of 'random_on_land', 'population_centers'");
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known{
      "constellation", "placement", "station_count", "receivers", "default_L",
      "transmitters_per_satellite", "max_pair_distance_m", "pair_allowlist", "time_grid",
      "channel", "solver", "solver_seed", "output_dir", "threads"};
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }

  ScenarioConfig cfg;
  try {
    if (!j.contains("constellation")) throw ConfigError("config needs a 'constellation'");
    if (!j.contains("placement")) throw ConfigError("config needs a 'placement'");
    cfg.constellation = parse_constellation(j.at("constellation"), base_dir);
    cfg.placement = parse_placement(j.at("placement"), base_dir);
    if (j.contains("station_count")) cfg.station_count = get_as<int>(j, "station_count");
    if (cfg.station_count < 1) throw ConfigError("station_count must be at least 1");
    if (j.contains("receivers")) cfg.receivers = serialization::capacity_from_json(j.at("receivers"), "receivers");
    if (j.contains("default_L")) cfg.default_L = serialization::capacity_from_json(j.at("default_L"), "default_L");
    if (j.contains("transmitters_per_satellite")) {
      cfg.transmitters_per_satellite = get_as<std::int64_t>(j, "transmitters_per_satellite");
      if (cfg.transmitters_per_satellite < 0) throw ConfigError("transmitters_per_satellite < 0");
    }
    if (j.contains("max_pair_distance_m")) cfg.max_pair_distance_m = get_as<double>(j, "max_pair_distance_m");
    if (j.contains("pair_allowlist")) {
      cfg.pair_allowlist = get_as<std::set<std::string>>(j, "pair_allowlist");
    }
    if (j.contains("time_grid")) {
      const auto& g = j.at("time_grid");
      if (g.contains("start")) {
        const auto& s = g.at("start");
        cfg.time_grid.start = s.is_number() ? s.get<double>() : orbital::parse_utc(get_as<std::string>(g, "start"));
      }
      if (g.contains("slot_seconds")) cfg.time_grid.slot_seconds = get_as<int>(g, "slot_seconds");
      if (g.contains("slot_count")) cfg.time_grid.slot_count = get_as<int>(g, "slot_count");
      if (cfg.time_grid.slot_seconds < 1 || cfg.time_grid.slot_count < 1) {
        throw ConfigError("time_grid slot_seconds and slot_count must be positive");
      }
    }
    if (j.contains("channel")) cfg.channel = serialization::channel_params_from_json(j.at("channel"));
    if (j.contains("solver")) {
      const auto name = get_as<std::string>(j, "solver");
      const auto kind = scheduler::parse_solver(name);
      if (!kind) throw ConfigError("unknown solver '" + name + "'");
      cfg.solver = *kind;
    }
    if (j.contains("solver_seed")) cfg.solver_seed = get_as<std::uint64_t>(j, "solver_seed");
    if (j.contains("output_dir")) cfg.output_dir = resolve(base_dir, get_as<std::string>(j, "output_dir"));
    if (j.contains("threads")) cfg.threads = get_as<int>(j, "threads");
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError&) {
    throw ConfigError("cannot read config file '" + path.string() + "'");
  }
  try {
    return from_json(serialization::parse(text), path.parent_path());
  } catch (const ParseError& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

// --- metrics ----------------------------------------------------------------

LongevityHistogram longevity_histogram(const std::vector<SlotConnections>& slots) {
  LongevityHistogram hist;
  std::map<std::pair<std::string, std::string>, int> running;
  for (const auto& slot : slots) {
    for (auto it = running.begin(); it != running.end();) {
      if (slot.contains(it->first)) {
        ++it;
      } else {
        ++hist[it->second];
        it = running.erase(it);
      }
    }
    for (const auto& c : slot) ++running[c];
  }
  for (const auto& [_, len] : running) ++hist[len];
  return hist;
}

Summary aggregate_metrics(const MetricsSeries& series) {
  if (series.slots.empty()) throw std::invalid_argument("cannot summarize an empty series");
  Summary s;
  s.slot_count = series.slots.size();
  double rate_sum = 0.0;
  for (const auto& r : series.slots) {
    rate_sum += r.aggregate_rate;
    s.day_rate_mass += r.day_rate;
    s.night_rate_mass += r.night_rate;
    s.day_fidelity_mass += r.day_fidelity_mass;
    s.night_fidelity_mass += r.night_fidelity_mass;
    s.max_sats_per_pair.push_back(r.max_sats_per_pair);
    s.max_pairs_per_sat.push_back(r.max_pairs_per_sat);
  }
  s.mean_rate = rate_sum / static_cast<double>(s.slot_count);
  if (s.day_rate_mass > 0.0) s.day_fidelity = s.day_fidelity_mass / s.day_rate_mass;
  if (s.night_rate_mass > 0.0) s.night_fidelity = s.night_fidelity_mass / s.night_rate_mass;
  const double mass = s.day_rate_mass + s.night_rate_mass;
  if (mass > 0.0) s.mean_fidelity = (s.day_fidelity_mass + s.night_fidelity_mass) / mass;

  s.per_station_mean_connections.assign(series.stations.size(), 0.0);
  for (const auto& r : series.slots) {
    for (std::size_t g = 0; g < r.connections_per_station.size() && g < series.stations.size(); ++g) {
      s.per_station_mean_connections[g] += static_cast<double>(r.connections_per_station[g]);
    }
  }
  for (auto& v : s.per_station_mean_connections) v /= static_cast<double>(s.slot_count);
  return s;
}

// --- scenario ---------------------------------------------------------------

scheduler::QsspInstance build_instance(const topology::VisibilitySnapshot& snap,
                                       const std::vector<topology::GroundStation>& stations,
                                       const std::vector<topology::StationPair>& pairs,
                                       std::int64_t transmitters_per_satellite) {
  scheduler::QsspInstance::Builder b;
  for (const auto& g : stations) b.station(g.id, g.receivers);
  for (const auto& p : pairs) b.pair(p.id, p.a, p.b, p.max_connections);
  std::set<std::string> sats;
  for (const auto& c : snap.connections) {
    if (sats.insert(c.satellite_id).second) b.satellite(c.satellite_id, transmitters_per_satellite);
    b.weight(c.satellite_id, c.pair_id, c.weight);
  }
  return b.build();
}

namespace {

class SatelliteTracks {
 public:
  explicit SatelliteTracks(const ScenarioConfig& cfg) {
    std::visit(
        [&](const auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, TleSource>) {
            elements_ = orbital::parse_tle_file(read_text_file(src.path));
          } else if constexpr (std::is_same_v<T, WalkerSource>) {
            elements_ = orbital::generate_walker_constellation(src.planes, src.sats_per_plane,
                                                               src.inclination_deg, src.altitude_m,
                                                               src.phasing, cfg.time_grid.start);
          } else {
            ephemeris_ = orbital::Ephemeris::parse_csv(read_text_file(src.path));
            ids_ = ephemeris_->satellite_ids();
          }
        },
        cfg.constellation);
  }

  std::vector<topology::SatellitePosition> at(orbital::UnixSeconds t) const {
    std::vector<topology::SatellitePosition> out;
    if (ephemeris_) {
      for (const auto& id : ids_) {
        if (auto p = ephemeris_->position(id, t)) out.push_back({id, *p});
      }
    } else {
      out.reserve(elements_.size());
      for (const auto& el : elements_) out.push_back({el.satellite_id, orbital::propagate_position(el, t)});
    }
    return out;
  }

 private:
  std::vector<orbital::OrbitalElements> elements_;
  std::optional<orbital::Ephemeris> ephemeris_;
  std::vector<std::string> ids_;
};

std::vector<topology::GroundStation> place_stations(const ScenarioConfig& cfg) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RandomOnLand>) {
          return topology::place_random_on_land(cfg.station_count, p.seed,
                                                topology::LandMask::load(p.land_mask), cfg.receivers);
        } else {
          return topology::place_population_centers(cfg.station_count, read_text_file(p.dataset),
                                                    cfg.receivers);
        }
      },
      cfg.placement);
}

SlotResult evaluate_slot(const ScenarioConfig& cfg, const SatelliteTracks& tracks,
                         const std::vector<topology::GroundStation>& stations,
                         const std::vector<topology::StationPair>& pairs,
                         const channel::LinkModel& model, int slot) {
  SlotResult r;
  r.slot = slot;
  r.unix_time = cfg.time_grid.slot_time(slot);

  std::vector<bool> day(stations.size());
  for (std::size_t g = 0; g < stations.size(); ++g) {
    day[g] = orbital::is_daytime(stations[g].location, r.unix_time);
  }
  const auto sats = tracks.at(r.unix_time);
  const auto snap = topology::visibility_snapshot(sats, stations, pairs, model, slot, day);
  r.max_sats_per_pair = snap.max_sats_per_pair;
  r.max_pairs_per_sat = snap.max_pairs_per_sat;

  const auto inst = build_instance(snap, stations, pairs, cfg.transmitters_per_satellite);
  scheduler::Assignment a;
  try {
    a = scheduler::solve(inst, cfg.solver, derive_seed(cfg.solver_seed, static_cast<std::uint64_t>(slot)));
  } catch (const SolverRefusal& e) {
    throw SolverRefusal("slot " + std::to_string(slot) + ": " + e.what());
  }

  std::map<std::pair<std::string, std::string>, const topology::Connection*> by_key;
  for (const auto& c : snap.connections) by_key.emplace(std::pair(c.satellite_id, c.pair_id), &c);
  std::map<std::string, std::size_t> station_pos;
  for (std::size_t g = 0; g < stations.size(); ++g) station_pos.emplace(stations[g].id, g);

  r.connections_per_station.assign(stations.size(), 0);
  double fidelity_mass = 0.0;
  for (const auto& [k, x] : a.x) {
    const auto& sat_id = inst.satellites()[static_cast<std::size_t>(k.satellite)].id;
    const auto& pair = inst.pairs()[static_cast<std::size_t>(k.pair)];
    const auto* conn = by_key.at({sat_id, pair.id});
    AssignedConnection ac{sat_id, pair.id, x, conn->weight, conn->fidelity, conn->is_day};
    const double mass = ac.weight * static_cast<double>(x);
    r.aggregate_rate += mass;
    r.num_connections += x;
    const double f_mass = mass * ac.fidelity.value_or(0.0);
    fidelity_mass += f_mass;
    (ac.is_day ? r.day_rate : r.night_rate) += mass;
    (ac.is_day ? r.day_fidelity_mass : r.night_fidelity_mass) += f_mass;
    for (const int g : {pair.station_a, pair.station_b}) {
      r.connections_per_station[station_pos.at(inst.stations()[static_cast<std::size_t>(g)].id)] += x;
    }
    r.connections.push_back(std::move(ac));
  }
  if (r.aggregate_rate > 0.0) r.mean_fidelity = fidelity_mass / r.aggregate_rate;
  return r;
}

}  // namespace

MetricsSeries run_scenario(const ScenarioConfig& cfg) {
  const channel::SpdcLinkModel model(cfg.channel);
  const SatelliteTracks tracks(cfg);
  MetricsSeries series;
  series.solver = std::string(scheduler::to_string(cfg.solver));
  series.stations = place_stations(cfg);
  const auto pairs = topology::build_pair_set(series.stations, cfg.max_pair_distance_m,
                                              cfg.default_L, cfg.pair_allowlist);

  const int n = cfg.time_grid.slot_count;
  series.slots.resize(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<bool> failed{false};
  const int workers = std::max(
      1, std::min(n, cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency())));

  // Slots are independent; results land at their own index so the merge is ordered.
  auto work = [&](int first) {
    for (int s = first; s < n && !failed.load(); s += workers) {
      try {
        series.slots[static_cast<std::size_t>(s)] =
            evaluate_slot(cfg, tracks, series.stations, pairs, model, s);
      } catch (...) {
        errors[static_cast<std::size_t>(s)] = std::current_exception();
        failed.store(true);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SlotConnections> per_slot;
  per_slot.reserve(series.slots.size());
  for (const auto& r : series.slots) {
    SlotConnections c;
    for (const auto& ac : r.connections) c.emplace(ac.satellite_id, ac.pair_id);
    per_slot.push_back(std::move(c));
  }
  series.longevity = longevity_histogram(per_slot);

  if (!series.slots.empty()) {
    const auto summary = aggregate_metrics(series);
    series.per_station_mean_connections = summary.per_station_mean_connections;
    series.day_fidelity = summary.day_fidelity;
    series.night_fidelity = summary.night_fidelity;
  }
  return series;
}

// --- export -----------------------------------------------------------------

namespace {

std::string opt(const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); }

}  // namespace

void export_csv(const MetricsSeries& series, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::ostringstream per_slot;
  per_slot << "slot,unix_time_s,solver,aggregate_rate_ebits_s,mean_fidelity,num_connections,"
              "max_sats_per_pair,max_pairs_per_sat\n";
  std::ostringstream assignments;
  assignments << "slot,satellite_id,pair_id,x,weight_ebits_s,fidelity\n";
  for (const auto& r : series.slots) {
    per_slot << r.slot << ',' << text::format_double(r.unix_time) << ',' << series.solver << ','
             << text::format_double(r.aggregate_rate) << ',' << opt(r.mean_fidelity) << ','
             << r.num_connections << ',' << r.max_sats_per_pair << ',' << r.max_pairs_per_sat << '\n';
    for (const auto& c : r.connections) {
      assignments << r.slot << ',' << c.satellite_id << ',' << c.pair_id << ',' << c.x << ','
                  << text::format_double(c.weight) << ',' << opt(c.fidelity) << '\n';
    }
  }

  std::ostringstream longevity;
  longevity << "duration_slots,count\n";
  for (const auto& [len, count] : series.longevity) longevity << len << ',' << count << '\n';

  std::ostringstream stations;
  stations << "station_id,lat_deg,lon_deg,receivers,mean_connections\n";
  for (std::size_t g = 0; g < series.stations.size(); ++g) {
    const auto& s = series.stations[g];
    const double mean = g < series.per_station_mean_connections.size()
                            ? series.per_station_mean_connections[g]
                            : 0.0;
    stations << s.id << ',' << text::format_double(s.location.latitude_deg) << ','
             << text::format_double(s.location.longitude_deg) << ',' << s.receivers.to_string()
             << ',' << text::format_double(mean) << '\n';
  }

  write_text_file(dir / "per_slot.csv", per_slot.str());
  write_text_file(dir / "assignments.csv", assignments.str());
  write_text_file(dir / "longevity.csv", longevity.str());
  write_text_file(dir / "stations.csv", stations.str());
}

}  // namespace qssp::harness
