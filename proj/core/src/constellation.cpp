#include "laesim/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace laesim {

std::vector<OrbitalElements> build_shell(const ShellConfig& cfg) {
  if (cfg.planes < 1 || cfg.sats_per_plane < 1) {
    throw std::invalid_argument("shell needs at least one plane and one satellite");
  }
  if (cfg.altitude_km <= 0.0) {
    throw std::invalid_argument("shell altitude must be positive");
  }
  std::vector<OrbitalElements> out;
  out.reserve(static_cast<size_t>(cfg.planes) * cfg.sats_per_plane);
  const double p_count = cfg.planes;
  const double s_count = cfg.sats_per_plane;
  for (int p = 0; p < cfg.planes; ++p) {
    for (int s = 0; s < cfg.sats_per_plane; ++s) {
      OrbitalElements el;
      el.id = {p, s};
      el.raan_deg = 360.0 * p / p_count;
      el.arg_latitude_deg =
          360.0 * s / s_count + 360.0 * cfg.phasing_factor * p / (p_count * s_count);
      out.push_back(el);
    }
  }
  return out;
}

SatelliteState propagate_inertial(const OrbitalElements& el, const ShellConfig& cfg,
                                  Instant t) {
  const double a = kEarthRadiusKm + cfg.altitude_km;
  const double n = std::sqrt(kMuEarthKm3S2 / (a * a * a));  // mean motion, rad/s
  const double u = deg2rad(el.arg_latitude_deg + cfg.phase_offset_deg) + n * t.seconds;
  const double raan = deg2rad(el.raan_deg);
  const double inc = deg2rad(cfg.inclination_deg);
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);

  SatelliteState st;
  st.id = el.id;
  st.position = {a * (co * cu - so * su * ci), a * (so * cu + co * su * ci),
                 a * (su * si), Frame::Inertial};
  st.velocity = {a * n * (-co * su - so * cu * ci), a * n * (-so * su + co * cu * ci),
                 a * n * (cu * si), Frame::Inertial};
  st.boresight = -1.0 * normalized(st.position);
  return st;
}

SatelliteState propagate(const OrbitalElements& el, const ShellConfig& cfg, Instant t) {
  SatelliteState st = propagate_inertial(el, cfg, t);
  st.position = inertial_to_earth_fixed(st.position, t);
  st.velocity = inertial_to_earth_fixed(st.velocity, t);
  st.boresight = -1.0 * normalized(st.position);
  return st;
}

std::vector<SatelliteState> propagate_all(const std::vector<OrbitalElements>& els,
                                          const ShellConfig& cfg, Instant t) {
  std::vector<SatelliteState> out;
  out.reserve(els.size());
  for (const auto& el : els) out.push_back(propagate(el, cfg, t));
  return out;
}

std::vector<SatelliteId> visible_sats(const CartesianVec& ground,
                                      const std::vector<SatelliteState>& states,
                                      double min_elev_deg) {
  std::vector<SatelliteId> out;
  for (const auto& st : states) {
    if (elevation_deg(ground, st.position) >= min_elev_deg) {
      out.push_back(st.id);
    }
  }
  return out;
}

}  // namespace laesim
