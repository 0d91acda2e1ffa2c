#pragma once

#include "qssp/capacity.hpp"
#include "qssp/channel.hpp"
#include "qssp/orbital.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qssp::topology {

struct GroundStation {
  std::string id;
  orbital::GeodeticPoint location;
  Capacity receivers{1};
  std::int64_t population = 0;  // 0 when not placed from a population dataset
};

struct StationPair {
  std::string id;
  std::string a;  // a < b lexicographically
  std::string b;
  Capacity max_connections{1};
};

/// "a|b" for a < b.
std::string pair_id(std::string_view a, std::string_view b);

/// 180 x 360 row-major 0/1 grid at 1 degree. Row 0 covers [90N, 89N),
/// column 0 covers [180W, 179W).
class LandMask {
 public:
  static constexpr int kRows = 180;
  static constexpr int kCols = 360;

  explicit LandMask(std::vector<std::uint8_t> cells);
  static LandMask load(const std::filesystem::path& path);

  bool is_land(double latitude_deg, double longitude_deg) const;
  std::size_t land_cells() const { return land_cells_; }

 private:
  std::vector<std::uint8_t> cells_;
  std::size_t land_cells_ = 0;
};

/// n stations drawn uniformly on the sphere (longitude uniform, sin(latitude)
/// uniform) and resampled until the mask reports land. Ids are "gs000"...
std::vector<GroundStation> place_random_on_land(int n, std::uint64_t seed, const LandMask& mask,
                                                Capacity receivers = Capacity{1});

/// The n most populous rows of a `name,lat_deg,lon_deg,population` CSV,
/// ties broken by name ascending, in selection order. Station id = name.
std::vector<GroundStation> place_population_centers(int n, std::string_view csv,
                                                    Capacity receivers = Capacity{1});

/// All unordered pairs within `max_pair_distance_m`, optionally restricted to
/// an allowlist of pair ids. L_j = min(default_L, R_a, R_b). Sorted by id.
std::vector<StationPair> build_pair_set(std::span<const GroundStation> stations,
                                        double max_pair_distance_m, Capacity default_L,
                                        const std::optional<std::set<std::string>>& allowlist = {});

struct SatellitePosition {
  std::string id;
  orbital::EcefPosition position;
};

struct Connection {
  std::string satellite_id;
  std::string pair_id;
  double weight = 0.0;  // ebits/s, > 0
  std::optional<double> fidelity;
  bool is_day = false;  // either endpoint in daylight
};

struct VisibilitySnapshot {
  int slot_index = 0;
  std::vector<Connection> connections;  // sorted by (satellite_id, pair_id)
  int max_sats_per_pair = 0;
  int max_pairs_per_sat = 0;
};

/// Connections (satellite, pair) with the satellite at or above the link
/// model's minimum elevation at both stations and positive weight.
/// `day_flags` is parallel to `stations`.
VisibilitySnapshot visibility_snapshot(std::span<const SatellitePosition> sats,
                                       std::span<const GroundStation> stations,
                                       std::span<const StationPair> pairs,
                                       const channel::LinkModel& model, int slot,
                                       const std::vector<bool>& day_flags);

}  // namespace qssp::topology
