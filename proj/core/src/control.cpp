#include "laesim/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "laesim/channel.hpp"

namespace laesim {

long beam_target_slot(BeamVariant v, long slot, long frame_slots) {
  if (slot < 0) throw std::invalid_argument("beam_target_slot: negative slot");
  switch (v) {
    case BeamVariant::TwoTimescale:
      if (frame_slots < 1) throw std::invalid_argument("beam_target_slot: frame_slots < 1");
      return (slot / frame_slots) * frame_slots;
    case BeamVariant::SlotLevel:
      return slot;
    case BeamVariant::FixedInitial:
      return 0;
    case BeamVariant::EarthCenter:
      return slot;
  }
  throw std::logic_error("beam_target_slot: unknown variant");
}

long position_report_count(BeamVariant v, long total_slots, long frame_slots) {
  if (total_slots < 0) throw std::invalid_argument("position_report_count: negative horizon");
  switch (v) {
    case BeamVariant::TwoTimescale:
      if (frame_slots < 1)
        throw std::invalid_argument("position_report_count: frame_slots < 1");
      return (total_slots + frame_slots - 1) / frame_slots;
    case BeamVariant::SlotLevel:
      return total_slots;
    case BeamVariant::FixedInitial:
      return total_slots > 0 ? 1 : 0;
    case BeamVariant::EarthCenter:
      return 0;
  }
  throw std::logic_error("position_report_count: unknown variant");
}

GeodeticPos beam_center(std::span<const GeodeticPos> lavs) {
  if (lavs.empty()) throw std::invalid_argument("beam_center: no positions");
  GeodeticPos c{0.0, 0.0, 0.0};
  for (const auto& p : lavs) {
    c.lat_deg += p.lat_deg;
    c.lon_deg += p.lon_deg;
    c.alt_km += p.alt_km;
  }
  const double n = static_cast<double>(lavs.size());
  c.lat_deg /= n;
  c.lon_deg /= n;
  c.alt_km /= n;
  return c;
}

void point_beams(std::vector<SatelliteState>& serving, const GeodeticPos& center) {
  const CartesianVec target = geodetic_to_cartesian(center);
  for (auto& sat : serving) sat.boresight = normalized(target - sat.position);
}

namespace {

bool jointly_visible(const SatelliteState& sat,
                     std::span<const CartesianVec> fleet_centroids,
                     double min_elev_deg) {
  for (const auto& c : fleet_centroids)
    if (elevation_deg(c, sat.position) < min_elev_deg) return false;
  return true;
}

}  // namespace

ServingSet select_serving_set(const std::vector<SatelliteState>& sats,
                              const GeodeticPos& center, int count,
                              double min_elev_deg,
                              std::span<const CartesianVec> fleet_centroids,
                              long slot) {
  if (count < 1) throw std::invalid_argument("select_serving_set: count < 1");
  const CartesianVec target = geodetic_to_cartesian(center);
  struct Candidate {
    double range;
    SatelliteId id;
  };
  std::vector<Candidate> pool;
  for (const auto& sat : sats) {
    if (!jointly_visible(sat, fleet_centroids, min_elev_deg)) continue;
    pool.push_back({norm(sat.position - target), sat.id});
  }
  if (pool.size() < static_cast<size_t>(count))
    throw std::runtime_error("insufficient visibility at slot " + std::to_string(slot) +
                             ": " + std::to_string(pool.size()) + " of " +
                             std::to_string(count) + " satellites");
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.range != b.range) return a.range < b.range;
    return a.id < b.id;
  });
  ServingSet set;
  set.slot = slot;
  set.ids.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) set.ids.push_back(pool[static_cast<size_t>(i)].id);
  return set;
}

SatelliteId best_channel_satellite(const std::vector<SatelliteState>& sats,
                                   double min_elev_deg,
                                   std::span<const CartesianVec> fleet_centroids,
                                   std::span<const CartesianVec> lav_positions,
                                   const BeamPattern& pattern, double carrier_ghz) {
  bool found = false;
  SatelliteId best_id{};
  double best_gain = 0.0;
  for (const auto& sat : sats) {
    if (!jointly_visible(sat, fleet_centroids, min_elev_deg)) continue;
    double gain = 0.0;
    for (const auto& lav : lav_positions) {
      const double d = slant_range_km(sat.position, lav);
      const double psi = off_boresight_deg(sat.position, sat.boresight, lav);
      const double db = element_gain_db(psi, pattern) - fspl_db(d, carrier_ghz);
      gain += std::pow(10.0, db / 10.0);
    }
    if (!found || gain > best_gain || (gain == best_gain && sat.id < best_id)) {
      found = true;
      best_gain = gain;
      best_id = sat.id;
    }
  }
  if (!found) throw std::runtime_error("best_channel_satellite: no visible satellite");
  return best_id;
}

ServiceMetrics service_run(const ServiceHooks& hooks, double target_rate,
                           long frame_slots) {
  if (frame_slots < 1) throw std::invalid_argument("service_run: frame_slots < 1");
  auto sustains = [&](long slot, const std::vector<SatelliteId>& entity) {
    const std::vector<double> rates = hooks.fleet_rates(slot, entity);
    if (rates.empty()) return false;
    for (double r : rates)
      if (r < target_rate) return false;
    return true;
  };
  ServiceMetrics m;
  std::vector<SatelliteId> entity = hooks.select(0);
  if (!sustains(0, entity)) {
    m.na = true;
    return m;
  }
  m.duration_slots = 1;
  bool initial_alive = true;
  for (long slot = 1; slot < frame_slots; ++slot) {
    if (sustains(slot, entity)) {
      if (initial_alive) m.duration_slots = slot + 1;
      continue;
    }
    ++m.handover_count;
    initial_alive = false;
    entity = hooks.select(slot);
  }
  return m;
}

}  // namespace laesim
