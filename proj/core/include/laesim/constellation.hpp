#pragma once

#include <compare>
#include <vector>

#include "laesim/geo.hpp"

namespace laesim {

/// Walker-style LEO shell: P planes x S satellites, inter-plane phasing F.
struct ShellConfig {
  int planes = 22;
  int sats_per_plane = 72;
  double altitude_km = 550.0;
  double inclination_deg = 53.0;
  int phasing_factor = 1;       // F in [0, P)
  double phase_offset_deg = 0.0;  // shell-wide initial phase at t=0
};

struct SatelliteId {
  int plane = 0;
  int slot = 0;
  auto operator<=>(const SatelliteId&) const = default;
};

/// Circular-orbit elements of one satellite at the scenario epoch.
struct OrbitalElements {
  SatelliteId id;
  double raan_deg = 0.0;
  double arg_latitude_deg = 0.0;  // initial argument of latitude
};

struct SatelliteState {
  SatelliteId id;
  CartesianVec position;   // EarthFixed, km
  CartesianVec velocity;   // EarthFixed axes, inertial magnitude, km/s
  CartesianVec boresight;  // unit, EarthFixed; nadir until steered
};

/// RAAN = 360 p/P, initial argument of latitude = 360 s/S + 360 F p/(P S).
std::vector<OrbitalElements> build_shell(const ShellConfig& cfg);

/// Two-body circular propagation in the inertial frame.
SatelliteState propagate_inertial(const OrbitalElements& el, const ShellConfig& cfg,
                                  Instant t);

/// Inertial propagation converted to the Earth-fixed frame; boresight nadir.
SatelliteState propagate(const OrbitalElements& el, const ShellConfig& cfg, Instant t);

std::vector<SatelliteState> propagate_all(const std::vector<OrbitalElements>& els,
                                          const ShellConfig& cfg, Instant t);

/// Ids of satellites with elevation >= min_elev_deg from `ground`
/// (ties at the threshold count as visible).
std::vector<SatelliteId> visible_sats(const CartesianVec& ground,
                                      const std::vector<SatelliteState>& states,
                                      double min_elev_deg);

}  // namespace laesim
