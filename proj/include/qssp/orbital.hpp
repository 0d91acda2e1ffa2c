#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qssp::orbital {

inline constexpr double kEarthRadius = 6'371'000.0;  // m, spherical Earth
inline constexpr double kEarthMu = 3.986004e14;      // m^3/s^2
inline constexpr double kSecondsPerDay = 86'400.0;

/// Seconds since 1970-01-01T00:00:00Z, fractional.
using UnixSeconds = double;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// Earth-centered Earth-fixed position, meters.
using EcefPosition = Vec3;
/// Earth-centered inertial (true-of-date, GMST-rotated) position, meters.
using EciPosition = Vec3;

struct GeodeticPoint {
  double latitude_deg = 0.0;   // [-90, 90]
  double longitude_deg = 0.0;  // [-180, 180)
  double altitude_m = 0.0;     // above the mean sphere
};

/// Mean orbital elements as carried by a TLE record.
struct OrbitalElements {
  std::string satellite_id;
  UnixSeconds epoch = 0.0;
  double inclination_deg = 0.0;       // [0, 180)
  double raan_deg = 0.0;              // [0, 360)
  double eccentricity = 0.0;          // [0, 1)
  double arg_perigee_deg = 0.0;       // [0, 360)
  double mean_anomaly_deg = 0.0;      // [0, 360), at epoch
  double mean_motion_rev_day = 0.0;   // > 0

  double mean_motion_rad_s() const;
  double semi_major_axis_m() const;
  double period_s() const;
};

/// Angles wrapped into their canonical ranges; throws std::invalid_argument
/// on out-of-domain eccentricity, mean motion, or a sub-surface orbit.
OrbitalElements normalized(OrbitalElements el);

struct TimeGrid {
  UnixSeconds start = 0.0;
  int slot_seconds = 60;
  int slot_count = 1440;

  UnixSeconds slot_time(int slot) const { return start + static_cast<double>(slot) * slot_seconds; }
  double span_s() const { return static_cast<double>(slot_seconds) * slot_count; }
};

// --- time -----------------------------------------------------------------

UnixSeconds unix_from_civil(int year, int month, int day, double seconds_of_day = 0.0);
/// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS[.fff]Z" (trailing Z optional).
UnixSeconds parse_utc(std::string_view text);
double julian_date(UnixSeconds t);
/// Greenwich mean sidereal angle, radians in [0, 2pi).
double gmst_rad(UnixSeconds t);

// --- TLE ------------------------------------------------------------------

/// Mod-10 checksum over the first 68 columns: digits count their value, '-' counts 1.
int tle_checksum(std::string_view line);

/// Parses one record: two 69-column lines, optionally preceded by a name line.
/// Throws qssp::ParseError with the line (1-based within the record) and column.
OrbitalElements parse_tle(std::string_view text);

/// Parses a file holding any number of two- or three-line records.
std::vector<OrbitalElements> parse_tle_file(std::string_view text);

/// Renders elements as a three-line record (name line + lines 1 and 2) with
/// valid checksums.
std::string format_tle(const OrbitalElements& el, int catalog_number);

// --- propagation ----------------------------------------------------------

/// Eccentric anomaly for mean anomaly `mean_anomaly` (rad) by Newton
/// iteration, tolerance 1e-12 rad, at most 50 iterations. Eccentricities
/// below 1e-8 are treated as circular.
double solve_kepler(double mean_anomaly, double eccentricity);

EciPosition propagate_eci(const OrbitalElements& el, UnixSeconds t);
EcefPosition eci_to_ecef(EciPosition p, UnixSeconds t);
EcefPosition propagate_position(const OrbitalElements& el, UnixSeconds t);

// --- geometry -------------------------------------------------------------

EcefPosition geodetic_to_ecef(const GeodeticPoint& p);
GeodeticPoint ecef_to_geodetic(EcefPosition p);

/// Elevation of `sat` above the local horizontal plane at `gs`, degrees in (-90, 90].
double elevation_angle(EcefPosition gs, EcefPosition sat);

/// Haversine distance on the R_E sphere, meters.
double great_circle_distance(const GeodeticPoint& a, const GeodeticPoint& b);

/// Great-circle radius of the ground region that sees a satellite at
/// `altitude_m` above `min_elevation_deg`.
double footprint_radius(double altitude_m, double min_elevation_deg);

/// Low-precision solar elevation (about 0.01 deg in declination over 1950-2050).
double sun_elevation(const GeodeticPoint& gs, UnixSeconds t);

/// Day iff the sun stands above civil twilight (-6 deg).
inline constexpr double kCivilTwilightDeg = -6.0;
inline bool is_daytime(const GeodeticPoint& gs, UnixSeconds t) {
  return sun_elevation(gs, t) > kCivilTwilightDeg;
}

// --- constellations ---------------------------------------------------------

/// Circular Walker-delta shell: RAAN spaced 360/planes, in-plane anomalies
/// spaced 360/sats_per_plane, plane k offset by k * phasing * 360 / total.
std::vector<OrbitalElements> generate_walker_constellation(int planes, int sats_per_plane,
                                                           double inclination_deg,
                                                           double altitude_m, int phasing,
                                                           UnixSeconds epoch);

/// Timestamped ECEF samples per satellite, from
/// `satellite_id,unix_time_s,x_m,y_m,z_m`. Positions between samples are
/// linearly interpolated; outside a satellite's sample span it is absent.
class Ephemeris {
 public:
  struct Sample {
    UnixSeconds t;
    EcefPosition position;
  };

  static Ephemeris parse_csv(std::string_view text);

  std::vector<std::string> satellite_ids() const;
  std::optional<EcefPosition> position(const std::string& satellite_id, UnixSeconds t) const;
  std::size_t size() const { return tracks_.size(); }

 private:
  std::map<std::string, std::vector<Sample>> tracks_;
};

}  // namespace qssp::orbital
