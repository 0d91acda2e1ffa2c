#include "qssp/orbital.hpp"

#include "qssp/error.hpp"
#include "qssp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qssp::orbital {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double wrap(double value, double period) {
  double r = std::fmod(value, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative value can round up to exactly `period`
  return r >= period ? 0.0 : r;
}

double wrap_longitude(double lon_deg) { return wrap(lon_deg + 180.0, 360.0) - 180.0; }

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant's algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

}  // namespace

// --- elements ---------------------------------------------------------------

double OrbitalElements::mean_motion_rad_s() const {
  return mean_motion_rev_day * kTwoPi / kSecondsPerDay;
}

double OrbitalElements::semi_major_axis_m() const {
  const double n = mean_motion_rad_s();
  return std::cbrt(kEarthMu / (n * n));
}

double OrbitalElements::period_s() const { return kSecondsPerDay / mean_motion_rev_day; }

OrbitalElements normalized(OrbitalElements el) {
  if (!(el.eccentricity >= 0.0 && el.eccentricity < 1.0)) {
    throw std::invalid_argument("eccentricity must lie in [0, 1)");
  }
  if (!(el.mean_motion_rev_day > 0.0)) throw std::invalid_argument("mean motion must be positive");
  if (!(el.inclination_deg >= 0.0 && el.inclination_deg <= 180.0)) {
    throw std::invalid_argument("inclination must lie in [0, 180]");
  }
  el.raan_deg = wrap(el.raan_deg, 360.0);
  el.arg_perigee_deg = wrap(el.arg_perigee_deg, 360.0);
  el.mean_anomaly_deg = wrap(el.mean_anomaly_deg, 360.0);
  const double perigee = el.semi_major_axis_m() * (1.0 - el.eccentricity);
  if (perigee <= kEarthRadius) {
    throw std::invalid_argument("orbit of '" + el.satellite_id + "' intersects the Earth");
  }
  return el;
}

// --- time -------------------------------------------------------------------

UnixSeconds unix_from_civil(int year, int month, int day, double seconds_of_day) {
  if (month < 1 || month > 12 || day < 1 || day > 31) {
    throw std::invalid_argument("invalid calendar date");
  }
  return static_cast<double>(days_from_civil(year, static_cast<unsigned>(month),
                                             static_cast<unsigned>(day))) *
             kSecondsPerDay +
         seconds_of_day;
}

UnixSeconds parse_utc(std::string_view text) {
  auto s = text::trim(text);
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') {
    throw ParseError("expected an ISO-8601 UTC timestamp, got '" + std::string(text) + "'");
  }
  const auto year = static_cast<int>(text::parse_int(s.substr(0, 4)));
  const auto month = static_cast<int>(text::parse_int(s.substr(5, 2)));
  const auto day = static_cast<int>(text::parse_int(s.substr(8, 2)));
  double sod = 0.0;
  if (s.size() > 10) {
    if ((s[10] != 'T' && s[10] != ' ') || s.size() < 19 || s[13] != ':' || s[16] != ':') {
      throw ParseError("expected an ISO-8601 UTC timestamp, got '" + std::string(text) + "'");
    }
    sod = 3600.0 * static_cast<double>(text::parse_int(s.substr(11, 2))) +
          60.0 * static_cast<double>(text::parse_int(s.substr(14, 2))) +
          text::parse_double(s.substr(17));
  }
  try {
    return unix_from_civil(year, month, day, sod);
  } catch (const std::invalid_argument&) {
    throw ParseError("invalid calendar date in '" + std::string(text) + "'");
  }
}

double julian_date(UnixSeconds t) { return t / kSecondsPerDay + 2440587.5; }

double gmst_rad(UnixSeconds t) {
  const double d = julian_date(t) - 2451545.0;
  return wrap(280.46061837 + 360.98564736629 * d, 360.0) * kDeg;
}

// --- TLE --------------------------------------------------------------------

int tle_checksum(std::string_view line) {
  int sum = 0;
  for (std::size_t k = 0; k < std::min<std::size_t>(68, line.size()); ++k) {
    const char c = line[k];
    if (c >= '0' && c <= '9') sum += c - '0';
    if (c == '-') sum += 1;
  }
  return sum % 10;
}

namespace {

// Columns are 1-based and inclusive, as in the published TLE layout.
std::string_view field(std::string_view line, int first, int last) {
  return line.substr(static_cast<std::size_t>(first - 1), static_cast<std::size_t>(last - first + 1));
}

void check_line(std::string_view line, char expected_number, int line_no) {
  if (line.size() != 69) {
    throw ParseError("TLE line must be 69 columns, found " + std::to_string(line.size()), line_no,
                     static_cast<int>(std::min<std::size_t>(line.size(), 69)));
  }
  if (line[0] != expected_number) {
    throw ParseError(std::string("expected line number '") + expected_number + "'", line_no, 1);
  }
  const char check = line[68];
  if (check < '0' || check > '9') throw ParseError("checksum column is not a digit", line_no, 69);
  if (tle_checksum(line) != check - '0') {
    throw ParseError("checksum mismatch: computed " + std::to_string(tle_checksum(line)) +
                         ", stored " + std::string(1, check),
                     line_no, 69);
  }
}

OrbitalElements parse_record(std::string_view name, std::string_view l1, std::string_view l2,
                             int first_line_no) {
  const int n1 = first_line_no;
  const int n2 = first_line_no + 1;
  check_line(l1, '1', n1);
  check_line(l2, '2', n2);

  OrbitalElements el;
  const auto catalog = text::trim(field(l1, 3, 7));
  if (catalog != text::trim(field(l2, 3, 7))) {
    throw ParseError("catalog numbers of lines 1 and 2 differ", n2, 3);
  }
  el.satellite_id = name.empty() ? std::string(catalog) : std::string(text::trim(name));

  const auto yy = text::parse_int(field(l1, 19, 20), n1, 19);
  const double doy = text::parse_double(field(l1, 21, 32), n1, 21);
  const int year = static_cast<int>(yy < 57 ? 2000 + yy : 1900 + yy);
  el.epoch = unix_from_civil(year, 1, 1) + (doy - 1.0) * kSecondsPerDay;

  el.inclination_deg = text::parse_double(field(l2, 9, 16), n2, 9);
  el.raan_deg = text::parse_double(field(l2, 18, 25), n2, 18);
  const auto ecc = text::trim(field(l2, 27, 33));
  if (ecc.empty() || ecc.find_first_not_of("0123456789") != std::string_view::npos) {
    throw ParseError("eccentricity field must be digits with implied decimal point", n2, 27);
  }
  el.eccentricity = text::parse_double("0." + std::string(ecc), n2, 27);
  el.arg_perigee_deg = text::parse_double(field(l2, 35, 42), n2, 35);
  el.mean_anomaly_deg = text::parse_double(field(l2, 44, 51), n2, 44);
  el.mean_motion_rev_day = text::parse_double(field(l2, 53, 63), n2, 53);

  try {
    return normalized(std::move(el));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), n2, 0);
  }
}

}  // namespace

OrbitalElements parse_tle(std::string_view text) {
  std::vector<std::string_view> ls;
  for (auto l : text::lines(text)) {
    if (!text::trim(l).empty()) ls.push_back(l);
  }
  if (ls.size() == 2) return parse_record({}, ls[0], ls[1], 1);
  if (ls.size() == 3) return parse_record(ls[0], ls[1], ls[2], 2);
  throw ParseError("a TLE record has two lines, optionally preceded by a name line");
}

std::vector<OrbitalElements> parse_tle_file(std::string_view text) {
  const auto ls = text::lines(text);
  std::vector<OrbitalElements> out;
  std::size_t k = 0;
  while (k < ls.size()) {
    if (text::trim(ls[k]).empty()) {
      ++k;
      continue;
    }
    const int line_no = static_cast<int>(k) + 1;
    if (ls[k].starts_with("1 ")) {
      if (k + 1 >= ls.size()) throw ParseError("truncated TLE record", line_no);
      out.push_back(parse_record({}, ls[k], ls[k + 1], line_no));
      k += 2;
    } else {
      if (k + 2 >= ls.size()) throw ParseError("truncated TLE record", line_no);
      out.push_back(parse_record(ls[k], ls[k + 1], ls[k + 2], line_no + 1));
      k += 3;
    }
  }
  return out;
}

std::string format_tle(const OrbitalElements& el, int catalog_number) {
  if (catalog_number < 0 || catalog_number > 99999) {
    throw std::invalid_argument("catalog number must fit in five digits");
  }
  int year = 1970;
  while (unix_from_civil(year + 1, 1, 1) <= el.epoch) ++year;
  while (unix_from_civil(year, 1, 1) > el.epoch) --year;
  const double doy = (el.epoch - unix_from_civil(year, 1, 1)) / kSecondsPerDay + 1.0;
  if (year < 1957 || year > 2056) throw std::invalid_argument("epoch outside the TLE year window");

  const auto ecc_digits = static_cast<long>(std::lround(el.eccentricity * 1e7));
  if (ecc_digits > 9999999) throw std::invalid_argument("eccentricity too large for TLE");

  char l1[128];
  char l2[128];
  std::snprintf(l1, sizeof l1, "1 %05dU %-8s %02d%012.8f  .00000000  00000-0  00000-0 0  999",
                catalog_number, "00000A", year % 100, doy);
  std::snprintf(l2, sizeof l2, "2 %05d %8.4f %8.4f %07ld %8.4f %8.4f %11.8f%5d", catalog_number,
                el.inclination_deg, el.raan_deg, ecc_digits, el.arg_perigee_deg,
                el.mean_anomaly_deg, el.mean_motion_rev_day, 0);
  std::string line1(l1);
  std::string line2(l2);
  if (line1.size() != 68 || line2.size() != 68) {
    throw std::logic_error("TLE formatting produced a malformed line");
  }
  line1 += static_cast<char>('0' + tle_checksum(line1));
  line2 += static_cast<char>('0' + tle_checksum(line2));
  return el.satellite_id + "\n" + line1 + "\n" + line2 + "\n";
}

// --- propagation ------------------------------------------------------------

double solve_kepler(double mean_anomaly, double eccentricity) {
  const double m = wrap(mean_anomaly, kTwoPi);
  if (eccentricity < 1e-8) return m;
  double e_anom = eccentricity < 0.8 ? m : kPi;
  for (int iter = 0; iter < 50; ++iter) {
    const double f = e_anom - eccentricity * std::sin(e_anom) - m;
    const double step = f / (1.0 - eccentricity * std::cos(e_anom));
    e_anom -= step;
    if (std::abs(step) < 1e-12) return e_anom;
  }
  throw std::runtime_error("Kepler's equation did not converge (e = " +
                           std::to_string(eccentricity) + ")");
}

EciPosition propagate_eci(const OrbitalElements& el, UnixSeconds t) {
  const double a = el.semi_major_axis_m();
  const double e = el.eccentricity;
  const double m = el.mean_anomaly_deg * kDeg + el.mean_motion_rad_s() * (t - el.epoch);
  const double ea = solve_kepler(m, e);

  const double xp = a * (std::cos(ea) - e);
  const double yp = a * std::sqrt(1.0 - e * e) * std::sin(ea);

  const double co = std::cos(el.raan_deg * kDeg), so = std::sin(el.raan_deg * kDeg);
  const double cw = std::cos(el.arg_perigee_deg * kDeg), sw = std::sin(el.arg_perigee_deg * kDeg);
  const double ci = std::cos(el.inclination_deg * kDeg), si = std::sin(el.inclination_deg * kDeg);

  return {(co * cw - so * sw * ci) * xp + (-co * sw - so * cw * ci) * yp,
          (so * cw + co * sw * ci) * xp + (-so * sw + co * cw * ci) * yp,
          (sw * si) * xp + (cw * si) * yp};
}

EcefPosition eci_to_ecef(EciPosition p, UnixSeconds t) {
  const double th = gmst_rad(t);
  const double c = std::cos(th), s = std::sin(th);
  return {c * p.x + s * p.y, -s * p.x + c * p.y, p.z};
}

EcefPosition propagate_position(const OrbitalElements& el, UnixSeconds t) {
  return eci_to_ecef(propagate_eci(el, t), t);
}

// --- geometry ---------------------------------------------------------------

EcefPosition geodetic_to_ecef(const GeodeticPoint& p) {
  const double r = kEarthRadius + p.altitude_m;
  const double lat = p.latitude_deg * kDeg;
  const double lon = p.longitude_deg * kDeg;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

GeodeticPoint ecef_to_geodetic(EcefPosition p) {
  const double r = p.norm();
  if (r == 0.0) throw std::invalid_argument("Earth's center has no geodetic coordinates");
  return {std::atan2(p.z, std::hypot(p.x, p.y)) / kDeg, wrap_longitude(std::atan2(p.y, p.x) / kDeg),
          r - kEarthRadius};
}

double elevation_angle(EcefPosition gs, EcefPosition sat) {
  const Vec3 d = sat - gs;
  const double range = d.norm();
  const double r = gs.norm();
  if (range < 1e-9 || r == 0.0) throw std::invalid_argument("elevation of coincident points");
  const double s = std::clamp(d.dot(gs) / (range * r), -1.0, 1.0);
  return std::asin(s) / kDeg;
}

double great_circle_distance(const GeodeticPoint& a, const GeodeticPoint& b) {
  const double p1 = a.latitude_deg * kDeg, p2 = b.latitude_deg * kDeg;
  const double dp = p2 - p1;
  const double dl = (b.longitude_deg - a.longitude_deg) * kDeg;
  const double h = std::sin(dp / 2) * std::sin(dp / 2) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(h)));
}

double footprint_radius(double altitude_m, double min_elevation_deg) {
  if (!(altitude_m > 0.0)) throw std::invalid_argument("altitude must be positive");
  if (!(min_elevation_deg >= 0.0 && min_elevation_deg <= 90.0)) {
    throw std::invalid_argument("minimum elevation must lie in [0, 90]");
  }
  const double eps = min_elevation_deg * kDeg;
  const double central =
      std::acos(kEarthRadius * std::cos(eps) / (kEarthRadius + altitude_m)) - eps;
  return kEarthRadius * std::max(0.0, central);
}

double sun_elevation(const GeodeticPoint& gs, UnixSeconds t) {
  const double n = julian_date(t) - 2451545.0;
  const double mean_lon = 280.460 + 0.9856474 * n;
  const double g = (357.528 + 0.9856003 * n) * kDeg;
  const double ecl_lon = (mean_lon + 1.915 * std::sin(g) + 0.020 * std::sin(2 * g)) * kDeg;
  const double obliquity = (23.439 - 0.0000004 * n) * kDeg;

  const double ra = std::atan2(std::cos(obliquity) * std::sin(ecl_lon), std::cos(ecl_lon));
  const double dec = std::asin(std::sin(obliquity) * std::sin(ecl_lon));
  const double hour_angle = gmst_rad(t) + gs.longitude_deg * kDeg - ra;
  const double lat = gs.latitude_deg * kDeg;
  const double s =
      std::sin(lat) * std::sin(dec) + std::cos(lat) * std::cos(dec) * std::cos(hour_angle);
  return std::asin(std::clamp(s, -1.0, 1.0)) / kDeg;
}

// --- constellations ---------------------------------------------------------

std::vector<OrbitalElements> generate_walker_constellation(int planes, int sats_per_plane,
                                                           double inclination_deg,
                                                           double altitude_m, int phasing,
                                                           UnixSeconds epoch) {
  if (planes < 1 || sats_per_plane < 1) {
    throw std::invalid_argument("a Walker shell needs at least one plane and one satellite");
  }
  const double a = kEarthRadius + altitude_m;
  const double rev_day = std::sqrt(kEarthMu / (a * a * a)) * kSecondsPerDay / kTwoPi;
  const int total = planes * sats_per_plane;

  std::vector<OrbitalElements> out;
  out.reserve(static_cast<std::size_t>(total));
  for (int p = 0; p < planes; ++p) {
    for (int s = 0; s < sats_per_plane; ++s) {
      char id[32];
      std::snprintf(id, sizeof id, "W%03d-%03d", p, s);
      OrbitalElements el;
      el.satellite_id = id;
      el.epoch = epoch;
      el.inclination_deg = inclination_deg;
      el.raan_deg = 360.0 * p / planes;
      el.eccentricity = 0.0;
      el.arg_perigee_deg = 0.0;
      el.mean_anomaly_deg = 360.0 * s / sats_per_plane + 360.0 * phasing * p / total;
      el.mean_motion_rev_day = rev_day;
      out.push_back(normalized(std::move(el)));
    }
  }
  return out;
}

Ephemeris Ephemeris::parse_csv(std::string_view text) {
  const auto ls = text::lines(text);
  if (ls.empty() || text::trim(ls[0]) != "satellite_id,unix_time_s,x_m,y_m,z_m") {
    throw ParseError("ephemeris CSV header must be 'satellite_id,unix_time_s,x_m,y_m,z_m'", 1, 1);
  }
  Ephemeris eph;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    const int line_no = static_cast<int>(k) + 1;
    if (text::trim(ls[k]).empty()) continue;
    const auto f = text::split(ls[k], ',');
    if (f.size() != 5) throw ParseError("expected 5 fields", line_no, 1);
    const auto id = std::string(text::trim(f[0]));
    if (id.empty()) throw ParseError("empty satellite id", line_no, 1);
    Sample s{text::parse_double(f[1], line_no, 2),
             {text::parse_double(f[2], line_no, 3), text::parse_double(f[3], line_no, 4),
              text::parse_double(f[4], line_no, 5)}};
    eph.tracks_[id].push_back(s);
  }
  for (auto& [id, track] : eph.tracks_) {
    std::stable_sort(track.begin(), track.end(),
                     [](const Sample& a, const Sample& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < track.size(); ++k) {
      if (track[k].t == track[k - 1].t) {
        throw ParseError("duplicate timestamp for satellite '" + id + "'");
      }
    }
  }
  return eph;
}

std::vector<std::string> Ephemeris::satellite_ids() const {
  std::vector<std::string> ids;
  ids.reserve(tracks_.size());
  for (const auto& [id, _] : tracks_) ids.push_back(id);
  return ids;
}

std::optional<EcefPosition> Ephemeris::position(const std::string& satellite_id,
                                                UnixSeconds t) const {
  const auto it = tracks_.find(satellite_id);
  if (it == tracks_.end()) return std::nullopt;
  const auto& track = it->second;
  const auto hi = std::lower_bound(track.begin(), track.end(), t,
                                   [](const Sample& s, double v) { return s.t < v; });
  if (hi == track.end()) return std::nullopt;
  if (hi->t == t) return hi->position;
  if (hi == track.begin()) return std::nullopt;
  const auto lo = std::prev(hi);
  const double f = (t - lo->t) / (hi->t - lo->t);
  return lo->position + f * (hi->position - lo->position);
}

}  // namespace qssp::orbital
