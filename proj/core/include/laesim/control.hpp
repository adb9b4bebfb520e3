#pragma once

#include <functional>
#include <span>
#include <vector>

#include "laesim/antenna.hpp"
#include "laesim/constellation.hpp"
#include "laesim/geo.hpp"

namespace laesim {

/// Beam-direction update schedule.
enum class BeamVariant {
  TwoTimescale,  // beam target refreshed every frame_slots slots
  SlotLevel,     // refreshed every slot
  FixedInitial,  // frozen at the slot-0 target
  EarthCenter,   // beams stay nadir; no target at all
};

enum class ReceiverMode {
  DistSat,       // M satellites stacked into one receive array
  SingleSat,     // nearest single satellite
  CoLocatedSat,  // best single satellite carrying the M-fold array
};

enum class TransmitterMode {
  DistLav,       // fleet of K spatially spread transmitters
  SingleLav,     // lone transmitter at the fleet centroid
  CoLocatedLav,  // K-antenna leader at the fleet centroid
};

struct Policy {
  BeamVariant variant = BeamVariant::TwoTimescale;
  long frame_slots = 200;
  ReceiverMode receiver = ReceiverMode::DistSat;
  int serving_count = 3;
  TransmitterMode transmitter = TransmitterMode::DistLav;
};

/// Slot whose fleet geometry defines the beam target at `slot`. EarthCenter
/// keeps beams nadir; the returned slot feeds serving-set selection only.
long beam_target_slot(BeamVariant v, long slot, long frame_slots);

/// Fleet-to-satellite position reports consumed over a horizon: one per frame
/// for the two-timescale schedule, one per slot at slot level, a single
/// initial report for the frozen schedule, none for Earth-center pointing.
long position_report_count(BeamVariant v, long total_slots, long frame_slots);

/// Arithmetic mean of lat, lon, alt. Longitude wraparound is not handled;
/// scenarios here span under two degrees.
GeodeticPos beam_center(std::span<const GeodeticPos> lavs);

/// Aim each satellite at the target: boresight = unit(center - position).
void point_beams(std::vector<SatelliteState>& serving, const GeodeticPos& center);

struct ServingSet {
  std::vector<SatelliteId> ids;  // ascending slant range to the beam center
  long slot = 0;
};

/// The `count` satellites nearest to the beam center among those at or above
/// min_elev_deg from every fleet centroid. Range ties break on SatelliteId.
/// Throws "insufficient visibility" naming the slot when fewer qualify.
ServingSet select_serving_set(const std::vector<SatelliteState>& sats,
                              const GeodeticPos& center, int count,
                              double min_elev_deg,
                              std::span<const CartesianVec> fleet_centroids,
                              long slot);

/// Joint-visible satellite maximizing the summed deterministic large-scale
/// gain (pattern times path loss, fading excluded) toward every transmitter,
/// evaluated with the boresights already set on `sats`. Ties break on id.
SatelliteId best_channel_satellite(const std::vector<SatelliteState>& sats,
                                   double min_elev_deg,
                                   std::span<const CartesianVec> fleet_centroids,
                                   std::span<const CartesianVec> lav_positions,
                                   const BeamPattern& pattern, double carrier_ghz);

struct ServiceMetrics {
  long duration_slots = 0;
  long handover_count = 0;
  bool na = false;  // initial entity missed the target at slot 0
};

/// Callbacks binding the service fold to a concrete world. `select` applies
/// the policy's selection rule fresh at the given slot; `fleet_rates` returns
/// the per-fleet rates the entity delivers at that slot.
struct ServiceHooks {
  std::function<std::vector<SatelliteId>(long slot)> select;
  std::function<std::vector<double>(long slot, const std::vector<SatelliteId>& entity)>
      fleet_rates;
};

/// Sticky-entity service fold over one frame. The slot-0 entity serves until
/// a slot where some fleet's rate drops below target; each failing slot
/// triggers one reselection and one handover. Duration counts the consecutive
/// slots from 0 sustained by the initial entity; NA if slot 0 already fails.
ServiceMetrics service_run(const ServiceHooks& hooks, double target_rate,
                           long frame_slots = 300);

}  // namespace laesim
