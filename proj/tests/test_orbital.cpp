#include "qssp/error.hpp"
#include "qssp/io.hpp"
#include "qssp/orbital.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

using namespace qssp;
using namespace qssp::orbital;

namespace {

constexpr double kRe = 6'371'000.0;
constexpr double kMu = 3.986004e14;
constexpr double kPi = std::numbers::pi;

const char* kSample =
    "SAMPLE-1\n"
    "1 25544U 98067A   23266.50000000  .00016717  00000-0  10270-3 0  9999\n"
    "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.06000000  1002\n";

// Sub-satellite point of a satellite at `alt` whose elevation seen from a
// ground point at central angle `psi` (rad), from the plane triangle.
double elevation_at_central_angle(double alt, double psi) {
  const double r = kRe + alt;
  const double dx = r * std::sin(psi);
  const double dz = r * std::cos(psi) - kRe;
  return std::atan2(dz, dx) * 180.0 / kPi;
}

// Independent footprint: bisection on the central angle where elevation hits eps.
double footprint_by_bisection(double alt, double eps_deg) {
  double lo = 0.0, hi = kPi / 2;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (elevation_at_central_angle(alt, mid) > eps_deg ? lo : hi) = mid;
  }
  return kRe * 0.5 * (lo + hi);
}

Vec3 rotate_z(Vec3 v, double a) {
  return {v.x * std::cos(a) - v.y * std::sin(a), v.x * std::sin(a) + v.y * std::cos(a), v.z};
}

}  // namespace

TEST_CASE("tle checksum and field extraction") {
  const auto el = parse_tle(kSample);
  CHECK(el.satellite_id == "SAMPLE-1");
  CHECK(el.inclination_deg == doctest::Approx(51.6416).epsilon(1e-12));
  CHECK(el.raan_deg == doctest::Approx(247.4627).epsilon(1e-12));
  CHECK(el.eccentricity == doctest::Approx(0.0006703).epsilon(1e-12));
  CHECK(el.arg_perigee_deg == doctest::Approx(130.5360).epsilon(1e-12));
  CHECK(el.mean_anomaly_deg == doctest::Approx(325.0288).epsilon(1e-12));
  CHECK(el.mean_motion_rev_day == doctest::Approx(15.06).epsilon(1e-12));
  CHECK(el.epoch == doctest::Approx(unix_from_civil(2023, 1, 1) + 265.5 * 86400.0));
}

TEST_CASE("tle line-2 inclination 53.0000 reads as 53") {
  const auto el = parse_tle_file(read_text_file(QSSP_DATA_DIR "/sample.tle"));
  REQUIRE(el.size() == 2);
  std::string rec =
      "1 00001U 00000A   23266.00000000  .00000000  00000-0  00000-0 0  9990\n"
      "2 00001  53.0000   0.0000 0000000   0.0000   0.0000 15.07819881    09\n";
  const auto w = parse_tle(rec);
  CHECK(w.inclination_deg == 53.0);
  CHECK(w.satellite_id == "00001");
}

TEST_CASE("tle checksum corruption is reported with its location") {
  std::string bad = kSample;
  const auto pos = bad.find("1002");
  bad[pos + 3] = '3';
  try {
    parse_tle(bad);
    FAIL("expected a checksum error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 69);
    CHECK(std::string(e.what()).find("checksum") != std::string::npos);
  }
}

TEST_CASE("tle malformed length and numeric fields") {
  std::string shortline = "1 25544U 98067A\n2 25544\n";
  CHECK_THROWS_AS(parse_tle(shortline), ParseError);
  // Replace the inclination with letters and repair the checksum.
  std::string l1 = "1 25544U 98067A   23266.50000000  .00016717  00000-0  10270-3 0  9999";
  std::string l2 = "2 25544  51.64x6 247.4627 0006703 130.5360 325.0288 15.06000000  100";
  l2 += static_cast<char>('0' + tle_checksum(l2));
  try {
    parse_tle(l1 + "\n" + l2 + "\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("tle formatting round-trips") {
  const auto shell = generate_walker_constellation(3, 4, 53.0, 550e3, 1, parse_utc("2023-09-23T00:00:00Z"));
  std::string text;
  int n = 1;
  for (const auto& e : shell) text += format_tle(e, n++);
  const auto back = parse_tle_file(text);
  REQUIRE(back.size() == shell.size());
  for (std::size_t k = 0; k < shell.size(); ++k) {
    CHECK(back[k].satellite_id == shell[k].satellite_id);
    CHECK(back[k].inclination_deg == doctest::Approx(shell[k].inclination_deg).epsilon(1e-6));
    CHECK(back[k].raan_deg == doctest::Approx(shell[k].raan_deg).epsilon(1e-6));
    CHECK(back[k].mean_anomaly_deg == doctest::Approx(shell[k].mean_anomaly_deg).epsilon(1e-6));
    CHECK(back[k].mean_motion_rev_day == doctest::Approx(shell[k].mean_motion_rev_day).epsilon(1e-8));
    CHECK(std::abs(back[k].epoch - shell[k].epoch) < 1e-3);
  }
}

TEST_CASE("sample record period is about 95.6 minutes") {
  const auto el = parse_tle(kSample);
  const double period_min = 1440.0 / 15.06;
  CHECK(el.period_s() / 60.0 == doctest::Approx(period_min).epsilon(1e-9));
  CHECK(el.period_s() / 60.0 == doctest::Approx(95.6).epsilon(0.002));
  const double n = 15.06 * 2 * kPi / 86400.0;
  CHECK(el.semi_major_axis_m() == doctest::Approx(std::cbrt(kMu / (n * n))).epsilon(1e-12));
}

TEST_CASE("normalized wraps angles and rejects bad elements") {
  OrbitalElements el;
  el.satellite_id = "x";
  el.raan_deg = -30.0;
  el.arg_perigee_deg = 725.0;
  el.mean_anomaly_deg = 360.0;
  el.mean_motion_rev_day = 15.0;
  const auto n = normalized(el);
  CHECK(n.raan_deg == doctest::Approx(330.0));
  CHECK(n.arg_perigee_deg == doctest::Approx(5.0));
  CHECK(n.mean_anomaly_deg == doctest::Approx(0.0));
  el.eccentricity = 1.0;
  CHECK_THROWS_AS(normalized(el), std::invalid_argument);
  el.eccentricity = 0.0;
  el.mean_motion_rev_day = 40.0;  // below the surface
  CHECK_THROWS_AS(normalized(el), std::invalid_argument);
}

TEST_CASE("kepler solver") {
  CHECK(solve_kepler(1.234, 0.0) == 1.234);
  CHECK(solve_kepler(1.234, 5e-9) == 1.234);
  for (double e : {0.01, 0.3, 0.7, 0.95}) {
    for (double m : {0.1, 1.0, 2.5, 3.1, 5.0}) {
      const double ecc = solve_kepler(m, e);
      CHECK(std::abs(ecc - e * std::sin(ecc) - m) < 1e-11);
    }
  }
}

TEST_CASE("propagation at epoch and after one period") {
  OrbitalElements el;
  el.satellite_id = "c";
  el.epoch = parse_utc("2023-09-23T00:00:00Z");
  el.mean_anomaly_deg = 90.0;
  el.mean_motion_rev_day = 15.06;
  const double a = el.semi_major_axis_m();
  const auto p0 = propagate_eci(el, el.epoch);
  CHECK(std::abs(p0.x) < 1e-6);
  CHECK(p0.y == doctest::Approx(a).epsilon(1e-12));
  CHECK(std::abs(p0.z) < 1e-6);

  el.inclination_deg = 53.0;
  el.raan_deg = 40.0;
  const auto e0 = propagate_eci(el, el.epoch);
  const auto e1 = propagate_eci(el, el.epoch + el.period_s());
  CHECK((e1 - e0).norm() < 1.0);
  const auto f0 = propagate_position(el, el.epoch);
  const auto f1 = propagate_position(el, el.epoch + el.period_s());
  CHECK((f1 - f0).norm() > 1000.0);  // Earth turned underneath
  CHECK(f0.norm() == doctest::Approx(e0.norm()).epsilon(1e-12));
  CHECK(f0.z == doctest::Approx(e0.z).epsilon(1e-12));
}

TEST_CASE("circular 550 km orbit keeps its radius") {
  const auto shell = generate_walker_constellation(1, 1, 53.0, 550e3, 0, parse_utc("2023-09-23T00:00:00Z"));
  REQUIRE(shell.size() == 1);
  const auto& el = shell[0];
  for (int k = 0; k <= 100; ++k) {
    const double t = el.epoch + el.period_s() * k / 100.0;
    CHECK(std::abs(propagate_position(el, t).norm() - 6'921'000.0) < 1.0);
  }
}

TEST_CASE("ECI to ECEF follows GMST") {
  const double t = parse_utc("2000-01-01T12:00:00Z");
  const double gmst_deg = 280.46061837;
  CHECK(gmst_rad(t) == doctest::Approx(gmst_deg * kPi / 180.0).epsilon(1e-12));
  const Vec3 p{7e6, 0, 1e6};
  const auto q = eci_to_ecef(p, t);
  CHECK(q.norm() == doctest::Approx(p.norm()).epsilon(1e-14));
  const auto back = rotate_z(q, gmst_rad(t));
  CHECK((back - p).norm() < 1e-6);
}

TEST_CASE("time parsing") {
  CHECK(parse_utc("1970-01-01T00:00:00Z") == 0.0);
  CHECK(parse_utc("2023-09-23T00:00:00Z") == 1695427200.0);
  CHECK(parse_utc("2023-09-23T00:00:30.5Z") == 1695427230.5);
  CHECK(julian_date(parse_utc("2000-01-01T12:00:00Z")) == doctest::Approx(2451545.0));
  CHECK_THROWS_AS(parse_utc("2023-13-01T00:00:00Z"), ParseError);
  CHECK_THROWS_AS(parse_utc("yesterday"), ParseError);
}

TEST_CASE("geodetic to ECEF on the sphere") {
  auto near = [](Vec3 a, Vec3 b) { return (a - b).norm() < 1e-6; };
  CHECK(near(geodetic_to_ecef({0, 0, 0}), {kRe, 0, 0}));
  CHECK(near(geodetic_to_ecef({90, 123, 0}), {0, 0, kRe}));
  CHECK(near(geodetic_to_ecef({0, 90, 0}), {0, kRe, 0}));
  const GeodeticPoint p{-33.9, 151.2, 1234.0};
  const auto back = ecef_to_geodetic(geodetic_to_ecef(p));
  CHECK(back.latitude_deg == doctest::Approx(p.latitude_deg).epsilon(1e-12));
  CHECK(back.longitude_deg == doctest::Approx(p.longitude_deg).epsilon(1e-12));
  CHECK(back.altitude_m == doctest::Approx(p.altitude_m).epsilon(1e-9));
}

TEST_CASE("elevation angle") {
  const auto gs = geodetic_to_ecef({10, 20, 0});
  const auto zen = geodetic_to_ecef({10, 20, 550e3});
  CHECK(elevation_angle(gs, zen) == doctest::Approx(90.0).epsilon(1e-12));

  // Horizon: move along the local east direction.
  const Vec3 east{-std::sin(20 * kPi / 180), std::cos(20 * kPi / 180), 0};
  CHECK(std::abs(elevation_angle(gs, gs + 1e5 * east)) < 1e-9);

  // 1125 km ground distance at 550 km altitude gives 20 deg.
  const double psi = 1125e3 / kRe;
  const auto g0 = geodetic_to_ecef({0, 0, 0});
  const Vec3 sat{(kRe + 550e3) * std::cos(psi), (kRe + 550e3) * std::sin(psi), 0};
  CHECK(elevation_angle(g0, sat) == doctest::Approx(20.0).epsilon(0.5 / 20.0));
  CHECK(elevation_angle(g0, sat) == doctest::Approx(elevation_at_central_angle(550e3, psi)).epsilon(1e-9));

  CHECK_THROWS_AS(elevation_angle(g0, g0), std::invalid_argument);
}

TEST_CASE("elevation is invariant under a common rotation about the polar axis") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180), ang(0, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const auto gs = geodetic_to_ecef({lat(rng), lon(rng), 0});
    const auto sat = geodetic_to_ecef({lat(rng), lon(rng), 550e3});
    const double a = ang(rng);
    CHECK(std::abs(elevation_angle(gs, sat) - elevation_angle(rotate_z(gs, a), rotate_z(sat, a))) < 1e-9);
  }
}

TEST_CASE("great-circle distance") {
  CHECK(great_circle_distance({12, 34, 0}, {12, 34, 0}) == 0.0);
  CHECK(great_circle_distance({0, 0, 0}, {0, 180, 0}) == doctest::Approx(kPi * kRe).epsilon(1e-12));
  CHECK(great_circle_distance({0, 0, 0}, {0, 1, 0}) == doctest::Approx(kRe * kPi / 180).epsilon(1e-12));
  CHECK(great_circle_distance({0, 0, 0}, {0, 1, 0}) == doctest::Approx(111.19e3).epsilon(1e-4));
  CHECK(great_circle_distance({45, 10, 0}, {-20, 70, 0}) ==
        doctest::Approx(great_circle_distance({-20, 70, 0}, {45, 10, 0})).epsilon(1e-15));
}

TEST_CASE("footprint radius") {
  CHECK(footprint_radius(550e3, 20.0) == doctest::Approx(1125e3).epsilon(10.0 / 1125.0));
  CHECK(footprint_radius(550e3, 20.0) == doctest::Approx(footprint_by_bisection(550e3, 20.0)).epsilon(1e-9));
  // Horizon limit: the tangent point sits at central angle acos(R / (R + h)).
  CHECK(footprint_radius(550e3, 0.0) == doctest::Approx(kRe * std::acos(kRe / (kRe + 550e3))).epsilon(1e-12));
  CHECK(footprint_radius(550e3, 0.0) == doctest::Approx(footprint_by_bisection(550e3, 0.0)).epsilon(1e-9));
  CHECK(std::abs(footprint_radius(800e3, 90.0)) < 1e-6);
  double prev = footprint_radius(550e3, 0.0);
  for (double e = 5.0; e < 90.0; e += 5.0) {
    const double f = footprint_radius(550e3, e);
    CHECK(f < prev);
    prev = f;
  }
  prev = footprint_radius(300e3, 20.0);
  for (double h = 400e3; h <= 2000e3; h += 100e3) {
    const double f = footprint_radius(h, 20.0);
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("elevation threshold agrees with the footprint test") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(-60, 60), lon(-180, 180), off(-15, 15);
  const double fp = footprint_radius(550e3, 20.0);
  int decided = 0;
  for (int k = 0; k < 2000; ++k) {
    const GeodeticPoint g{lat(rng), lon(rng), 0};
    const GeodeticPoint sub{std::clamp(g.latitude_deg + off(rng), -89.0, 89.0), g.longitude_deg + off(rng), 0};
    const double d = great_circle_distance(g, sub);
    if (std::abs(d - fp) <= 1e3) continue;
    ++decided;
    const bool visible = elevation_angle(geodetic_to_ecef(g), geodetic_to_ecef({sub.latitude_deg, sub.longitude_deg, 550e3})) >= 20.0;
    CHECK(visible == (d <= fp));
  }
  CHECK(decided > 1000);
}

TEST_CASE("sun elevation") {
  // Equation of time is about +7.5 min on 23 Sep and +1.5 min on 22 Dec.
  const double noon_sep = parse_utc("2023-09-23T11:52:30Z");
  CHECK(sun_elevation({0, 0, 0}, noon_sep) == doctest::Approx(90.0).epsilon(2.0 / 90.0));
  CHECK(sun_elevation({0, 0, 0}, noon_sep + 43200) == doctest::Approx(-90.0).epsilon(2.0 / 90.0));
  const double noon_dec = parse_utc("2023-12-22T11:58:30Z");
  CHECK(sun_elevation({45, 0, 0}, noon_dec) == doctest::Approx(90.0 - 45.0 - 23.44).epsilon(1.0 / 21.56));
  CHECK(is_daytime({0, 0, 0}, noon_sep));
  CHECK_FALSE(is_daytime({0, 0, 0}, noon_sep + 43200));
}

TEST_CASE("sun elevation crosses thresholds an even number of times per day") {
  const double t0 = parse_utc("2023-06-21T00:00:00Z");
  for (const GeodeticPoint g : {GeodeticPoint{0, 0, 0}, GeodeticPoint{35.7, 139.7, 0},
                                GeodeticPoint{-33.9, -70.6, 0}, GeodeticPoint{51.5, -0.1, 0}}) {
    for (double thr : {-6.0, 0.0, 10.0, -30.0}) {
      int crossings = 0;
      bool above = sun_elevation(g, t0) > thr;
      for (int m = 1; m <= 1440; ++m) {
        const bool now = sun_elevation(g, t0 + 60.0 * m) > thr;
        crossings += now != above;
        above = now;
      }
      CHECK(crossings % 2 == 0);
    }
  }
}

TEST_CASE("walker constellation") {
  const double epoch = parse_utc("2023-09-23T00:00:00Z");
  const auto one = generate_walker_constellation(1, 1, 53.0, 550e3, 0, epoch);
  REQUIRE(one.size() == 1);
  CHECK(one[0].inclination_deg == 53.0);
  CHECK(one[0].eccentricity == 0.0);

  const auto shell = generate_walker_constellation(4, 5, 53.0, 550e3, 1, epoch);
  REQUIRE(shell.size() == 20);
  std::set<double> raan;
  for (const auto& e : shell) raan.insert(e.raan_deg);
  CHECK(raan == std::set<double>{0.0, 90.0, 180.0, 270.0});
  std::set<std::string> ids;
  for (const auto& e : shell) ids.insert(e.satellite_id);
  CHECK(ids.size() == 20);

  const double a = kRe + 550e3;
  const double expected = 2 * kPi * std::sqrt(a * a * a / kMu);
  for (const auto& e : shell) {
    CHECK(e.period_s() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(e.period_s() / 60.0 == doctest::Approx(95.6).epsilon(0.2 / 95.6));
  }
  // In-plane spacing 72 deg; plane offset 360 * phasing / total = 18 deg.
  CHECK(shell[1].mean_anomaly_deg - shell[0].mean_anomaly_deg == doctest::Approx(72.0));
  CHECK(shell[5].mean_anomaly_deg - shell[0].mean_anomaly_deg == doctest::Approx(18.0));
  CHECK_THROWS_AS(generate_walker_constellation(0, 1, 53, 550e3, 0, epoch), std::invalid_argument);
}

TEST_CASE("ephemeris ingest interpolates linearly") {
  const auto eph = Ephemeris::parse_csv(
      "satellite_id,unix_time_s,x_m,y_m,z_m\n"
      "B,0,7000000,0,0\n"
      "B,60,7000000,60000,0\n"
      "A,100,0,0,7000000\n");
  CHECK(eph.satellite_ids() == std::vector<std::string>{"A", "B"});
  const auto mid = eph.position("B", 30.0);
  REQUIRE(mid.has_value());
  CHECK(mid->y == doctest::Approx(30000.0));
  CHECK(eph.position("B", 60.0)->y == doctest::Approx(60000.0));
  CHECK_FALSE(eph.position("B", 61.0).has_value());
  CHECK_FALSE(eph.position("B", -1.0).has_value());
  CHECK(eph.position("A", 100.0)->z == 7000000.0);
  CHECK_FALSE(eph.position("C", 0.0).has_value());
  CHECK_THROWS_AS(Ephemeris::parse_csv("id,t,x,y,z\n"), ParseError);
  CHECK_THROWS_AS(Ephemeris::parse_csv("satellite_id,unix_time_s,x_m,y_m,z_m\nB,zero,1,2,3\n"), ParseError);
}
