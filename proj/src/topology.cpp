#include "qssp/topology.hpp"

#include "qssp/error.hpp"
#include "qssp/io.hpp"
#include "qssp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

namespace qssp::topology {

std::string pair_id(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::string id;
  id.reserve(a.size() + b.size() + 1);
  id.append(a).append("|").append(b);
  return id;
}

LandMask::LandMask(std::vector<std::uint8_t> cells) : cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(kRows * kCols)) {
    throw std::invalid_argument("land mask must hold 180 x 360 cells");
  }
  for (auto& c : cells_) {
    if (c > 1) throw std::invalid_argument("land mask cells must be 0 or 1");
    land_cells_ += c;
  }
}

LandMask LandMask::load(const std::filesystem::path& path) {
  const auto bytes = read_text_file(path);
  try {
    return LandMask(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
  } catch (const std::invalid_argument& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

bool LandMask::is_land(double latitude_deg, double longitude_deg) const {
  const int row = std::clamp(static_cast<int>(std::floor(90.0 - latitude_deg)), 0, kRows - 1);
  const int col = std::clamp(static_cast<int>(std::floor(longitude_deg + 180.0)), 0, kCols - 1);
  return cells_[static_cast<std::size_t>(row * kCols + col)] != 0;
}

std::vector<GroundStation> place_random_on_land(int n, std::uint64_t seed, const LandMask& mask,
                                                Capacity receivers) {
  if (n < 1) throw std::invalid_argument("station count must be at least 1");
  if (mask.land_cells() == 0) throw std::invalid_argument("land mask has no land cells");
  SplitMix64 rng(seed);
  std::vector<GroundStation> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    const double lon = -180.0 + 360.0 * rng.uniform01();
    const double lat = std::asin(2.0 * rng.uniform01() - 1.0) * 180.0 / std::numbers::pi;
    if (!mask.is_land(lat, lon)) continue;
    char id[16];
    std::snprintf(id, sizeof id, "gs%03zu", out.size());
    out.push_back({id, {lat, lon, 0.0}, receivers, 0});
  }
  return out;
}

std::vector<GroundStation> place_population_centers(int n, std::string_view csv,
                                                    Capacity receivers) {
  if (n < 1) throw std::invalid_argument("station count must be at least 1");
  const auto ls = text::lines(csv);
  if (ls.empty() || text::trim(ls[0]) != "name,lat_deg,lon_deg,population") {
    throw ParseError("population CSV header must be 'name,lat_deg,lon_deg,population'", 1, 1);
  }
  std::vector<GroundStation> rows;
  std::map<std::string, int> seen;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    const int line_no = static_cast<int>(k) + 1;
    if (text::trim(ls[k]).empty()) continue;
    const auto f = text::split(ls[k], ',');
    if (f.size() != 4) throw ParseError("expected 4 fields", line_no, 1);
    GroundStation gs;
    gs.id = std::string(text::trim(f[0]));
    if (gs.id.empty()) throw ParseError("missing city name", line_no, 1);
    if (auto [it, inserted] = seen.emplace(gs.id, line_no); !inserted) {
      throw ParseError("duplicate city '" + gs.id + "' (first on line " +
                           std::to_string(it->second) + ")",
                       line_no, 1);
    }
    gs.location.latitude_deg = text::parse_double(f[1], line_no, 2);
    gs.location.longitude_deg = text::parse_double(f[2], line_no, 3);
    if (std::abs(gs.location.latitude_deg) > 90.0 || std::abs(gs.location.longitude_deg) > 180.0) {
      throw ParseError("coordinates out of range", line_no, 2);
    }
    gs.population = text::parse_int(f[3], line_no, 4);
    if (gs.population < 0) throw ParseError("negative population", line_no, 4);
    gs.receivers = receivers;
    rows.push_back(std::move(gs));
  }
  if (static_cast<int>(rows.size()) < n) {
    throw ParseError("population dataset has " + std::to_string(rows.size()) + " rows, " +
                     std::to_string(n) + " requested");
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GroundStation& a, const GroundStation& b) {
    if (a.population != b.population) return a.population > b.population;
    return a.id < b.id;
  });
  rows.resize(static_cast<std::size_t>(n));
  return rows;
}

std::vector<StationPair> build_pair_set(std::span<const GroundStation> stations,
                                        double max_pair_distance_m, Capacity default_L,
                                        const std::optional<std::set<std::string>>& allowlist) {
  std::set<std::string> ids;
  for (const auto& s : stations) {
    if (!ids.insert(s.id).second) throw std::invalid_argument("duplicate station id '" + s.id + "'");
  }
  std::vector<StationPair> out;
  for (std::size_t u = 0; u < stations.size(); ++u) {
    for (std::size_t v = u + 1; v < stations.size(); ++v) {
      const auto* a = &stations[u];
      const auto* b = &stations[v];
      if (b->id < a->id) std::swap(a, b);
      if (orbital::great_circle_distance(a->location, b->location) > max_pair_distance_m) continue;
      auto id = pair_id(a->id, b->id);
      if (allowlist && !allowlist->contains(id)) continue;
      out.push_back({std::move(id), a->id, b->id, min(default_L, min(a->receivers, b->receivers))});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const StationPair& x, const StationPair& y) { return x.id < y.id; });
  return out;
}

VisibilitySnapshot visibility_snapshot(std::span<const SatellitePosition> sats,
                                       std::span<const GroundStation> stations,
                                       std::span<const StationPair> pairs,
                                       const channel::LinkModel& model, int slot,
                                       const std::vector<bool>& day_flags) {
  if (day_flags.size() != stations.size()) {
    throw std::invalid_argument("day flags must be given for every station");
  }
  std::map<std::string, std::size_t> station_index;
  std::vector<orbital::EcefPosition> station_ecef;
  for (std::size_t k = 0; k < stations.size(); ++k) {
    station_index.emplace(stations[k].id, k);
    station_ecef.push_back(orbital::geodetic_to_ecef(stations[k].location));
  }
  struct PairRef {
    std::size_t a;
    std::size_t b;
  };
  std::vector<PairRef> refs;
  refs.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto ia = station_index.find(p.a);
    const auto ib = station_index.find(p.b);
    if (ia == station_index.end() || ib == station_index.end()) {
      throw std::invalid_argument("pair '" + p.id + "' references an unknown station");
    }
    refs.push_back({ia->second, ib->second});
  }

  // Stable (satellite_id, pair_id) output order regardless of input order.
  std::vector<std::size_t> sat_order(sats.size());
  for (std::size_t k = 0; k < sats.size(); ++k) sat_order[k] = k;
  std::sort(sat_order.begin(), sat_order.end(),
            [&](std::size_t x, std::size_t y) { return sats[x].id < sats[y].id; });
  std::vector<std::size_t> pair_order(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) pair_order[k] = k;
  std::sort(pair_order.begin(), pair_order.end(),
            [&](std::size_t x, std::size_t y) { return pairs[x].id < pairs[y].id; });

  const double min_el = model.min_elevation_deg();
  VisibilitySnapshot snap;
  snap.slot_index = slot;
  std::vector<int> sats_per_pair(pairs.size(), 0);
  std::vector<bool> visible(stations.size());
  for (const auto si : sat_order) {
    const auto& sat = sats[si];
    for (std::size_t g = 0; g < stations.size(); ++g) {
      visible[g] = orbital::elevation_angle(station_ecef[g], sat.position) >= min_el;
    }
    int pairs_here = 0;
    for (const auto pj : pair_order) {
      const auto& r = refs[pj];
      if (!visible[r.a] || !visible[r.b]) continue;
      const bool day = day_flags[r.a] || day_flags[r.b];
      const auto m = model.evaluate(sat.position, station_ecef[r.a], station_ecef[r.b], day);
      if (!(m.rate > 0.0)) continue;
      snap.connections.push_back({sat.id, pairs[pj].id, m.rate, m.fidelity, day});
      ++pairs_here;
      ++sats_per_pair[pj];
    }
    snap.max_pairs_per_sat = std::max(snap.max_pairs_per_sat, pairs_here);
  }
  for (const int c : sats_per_pair) snap.max_sats_per_pair = std::max(snap.max_sats_per_pair, c);
  return snap;
}

}  // namespace qssp::topology
