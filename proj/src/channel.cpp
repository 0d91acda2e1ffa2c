#include "qssp/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qssp::channel {
namespace {

void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
}

// Probability that at least one of two photons survives an arm of efficiency eta.
double two_photon_click(double eta) { return 1.0 - (1.0 - eta) * (1.0 - eta); }

}  // namespace

void ChannelParams::validate() const {
  require_positive(wavelength, "wavelength");
  if (!(pump_power >= 0.0) || !std::isfinite(pump_power)) {
    throw std::invalid_argument("pump_power must be non-negative");
  }
  require_positive(rep_rate, "rep_rate");
  require_probability(eta_s, "eta_s");
  require_probability(eta_g, "eta_g");
  require_positive(r_s, "r_s");
  require_positive(r_g, "r_g");
  require_positive(t_A, "t_A");
  if (!(theta_e >= 0.0 && theta_e < 90.0)) throw std::invalid_argument("theta_e must lie in [0, 90)");
  require_probability(P_d_day, "P_d_day");
  require_probability(P_d_night, "P_d_night");
  require_probability(eta_zenith_atm, "eta_zenith_atm");
}

double photon_number_dist(double pump_power, int n) {
  if (!(pump_power >= 0.0)) throw std::invalid_argument("mean photon number must be non-negative");
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  // Evaluated in log space so large n neither overflows nor divides 0/0.
  if (pump_power == 0.0) return n == 0 ? 1.0 : 0.0;
  const double log_p = std::log(n + 1.0) + n * std::log(pump_power) -
                       (n + 2.0) * std::log1p(pump_power);
  return std::exp(log_p);
}

double free_space_transmissivity(double distance_m, const ChannelParams& p) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("link distance must be positive");
  const double ratio = std::numbers::pi * p.r_s * p.r_g / (p.wavelength * distance_m);
  return std::min(1.0, ratio * ratio);
}

double atmospheric_transmissivity(double elevation_deg, const ChannelParams& p) {
  if (elevation_deg < p.theta_e || elevation_deg > 90.0) {
    throw std::domain_error("elevation " + std::to_string(elevation_deg) +
                            " deg is below the link limit");
  }
  // Slant path through the shell is t_A / sin(el); attenuation is exponential in path length.
  const double airmass = 1.0 / std::sin(elevation_deg * std::numbers::pi / 180.0);
  return std::pow(p.eta_zenith_atm, airmass);
}

double arm_transmissivity(orbital::EcefPosition sat, orbital::EcefPosition gs,
                          const ChannelParams& p) {
  const double el = orbital::elevation_angle(gs, sat);
  const double range = (sat - gs).norm();
  return p.eta_s * p.eta_g * free_space_transmissivity(range, p) * atmospheric_transmissivity(el, p);
}

double pair_rate(double eta1, double eta2, const ChannelParams& p) {
  return p.rep_rate * photon_number_dist(p.pump_power, 1) * eta1 * eta2;
}

std::optional<double> pair_fidelity(double eta1, double eta2, double dark_click,
                                    const ChannelParams& p) {
  const double p1 = photon_number_dist(p.pump_power, 1);
  const double p2 = photon_number_dist(p.pump_power, 2);
  const double signal = p1 * eta1 * eta2;
  const double multi = p2 * two_photon_click(eta1) * two_photon_click(eta2);
  const double click1 = p1 * eta1 + p2 * two_photon_click(eta1);
  const double click2 = p1 * eta2 + p2 * two_photon_click(eta2);
  const double dark = dark_click * (click1 + click2) + dark_click * dark_click;
  const double total = signal + multi + dark;
  if (!(total > 0.0)) return std::nullopt;
  return (signal + (multi + dark) / 4.0) / total;
}

LinkMetrics connection_weight(orbital::EcefPosition sat, orbital::EcefPosition gs_a,
                              orbital::EcefPosition gs_b, const ChannelParams& p, bool is_day) {
  LinkMetrics m;
  if (orbital::elevation_angle(gs_a, sat) < p.theta_e ||
      orbital::elevation_angle(gs_b, sat) < p.theta_e) {
    return m;
  }
  m.transmissivity_1 = arm_transmissivity(sat, gs_a, p);
  m.transmissivity_2 = arm_transmissivity(sat, gs_b, p);
  m.rate = pair_rate(m.transmissivity_1, m.transmissivity_2, p);
  m.fidelity = pair_fidelity(m.transmissivity_1, m.transmissivity_2,
                             is_day ? p.P_d_day : p.P_d_night, p);
  return m;
}

}  // namespace qssp::channel
