#pragma once

#include "qssp/orbital.hpp"

#include <optional>

namespace qssp::channel {

/// Physical constants of the dual-downlink SPDC link.
struct ChannelParams {
  double wavelength = 737e-9;          // lambda_s, m
  double pump_power = 0.078;           // N_s, mean photons per mode
  double rep_rate = 1e9;               // tau, pulses per second
  double eta_s = 0.707;                // satellite transmitter efficiency
  double eta_g = 0.707;                // ground receiver efficiency
  double r_s = 0.1;                    // transmitter aperture radius, m
  double r_g = 1.0;                    // receiver aperture radius, m
  double t_A = 5000.0;                 // atmospheric shell thickness, m
  double theta_e = 20.0;               // minimum elevation, deg
  double P_d_day = 3e-3;               // dark-click probability, daytime
  double P_d_night = 3e-7;             // dark-click probability, night
  double eta_zenith_atm = 0.5;         // clear-sky zenith atmospheric transmissivity

  /// Throws std::invalid_argument when a probability leaves [0,1] or a
  /// length/rate is not positive.
  void validate() const;
};

struct LinkMetrics {
  double transmissivity_1 = 0.0;
  double transmissivity_2 = 0.0;
  double rate = 0.0;                  // ebits/s
  std::optional<double> fidelity;     // absent when no coincidences occur
};

/// p(n) = (n+1) N_s^n / (N_s+1)^(n+2): thermal-like pair-number statistics.
double photon_number_dist(double pump_power, int n);

/// min{1, (pi r_s r_g / (lambda L))^2}.
double free_space_transmissivity(double distance_m, const ChannelParams& p);

/// eta_zenith^(1/sin(elevation)); throws std::domain_error below theta_e.
double atmospheric_transmissivity(double elevation_deg, const ChannelParams& p);

/// End-to-end single-arm efficiency; throws std::domain_error below theta_e.
double arm_transmissivity(orbital::EcefPosition sat, orbital::EcefPosition gs,
                          const ChannelParams& p);

/// Genuine single-pair coincidence rate tau * p(1) * eta1 * eta2.
double pair_rate(double eta1, double eta2, const ChannelParams& p);

/// Coincidence-bookkeeping fidelity. Signal coincidences count with fidelity
/// 1, multi-pair and dark-click coincidences are maximally mixed (1/4).
std::optional<double> pair_fidelity(double eta1, double eta2, double dark_click,
                                    const ChannelParams& p);

/// Rate and fidelity for satellite `sat` serving stations at `gs_a`, `gs_b`.
/// Zero rate and no fidelity when either arm is below theta_e.
LinkMetrics connection_weight(orbital::EcefPosition sat, orbital::EcefPosition gs_a,
                              orbital::EcefPosition gs_b, const ChannelParams& p, bool is_day);

/// Swappable link model used by the visibility snapshot.
class LinkModel {
 public:
  virtual ~LinkModel() = default;
  virtual double min_elevation_deg() const = 0;
  virtual LinkMetrics evaluate(orbital::EcefPosition sat, orbital::EcefPosition gs_a,
                               orbital::EcefPosition gs_b, bool is_day) const = 0;
};

class SpdcLinkModel final : public LinkModel {
 public:
  explicit SpdcLinkModel(ChannelParams params) : params_(params) { params_.validate(); }

  const ChannelParams& params() const { return params_; }
  double min_elevation_deg() const override { return params_.theta_e; }
  LinkMetrics evaluate(orbital::EcefPosition sat, orbital::EcefPosition gs_a,
                       orbital::EcefPosition gs_b, bool is_day) const override {
    return connection_weight(sat, gs_a, gs_b, params_, is_day);
  }

 private:
  ChannelParams params_;
};

}  // namespace qssp::channel
