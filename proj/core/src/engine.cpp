#include "laesim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "laesim/csv.hpp"

namespace laesim {

namespace {

struct World {
  ScenarioConfig cfg;
  std::vector<OrbitalElements> shell;
  ArrayGeometry colocated_array;  // the M-fold array of one satellite

  explicit World(const ScenarioConfig& c) : cfg(c) {
    validate_scenario(cfg);
    shell = build_shell(cfg.shell);
    colocated_array = cfg.array;
    colocated_array.rows *= cfg.policy.serving_count;
  }

  const SatelliteState& state_of(const std::vector<SatelliteState>& sats,
                                 SatelliteId id) const {
    const size_t idx = static_cast<size_t>(id.plane) *
                           static_cast<size_t>(cfg.shell.sats_per_plane) +
                       static_cast<size_t>(id.slot);
    if (idx >= sats.size() || !(sats[idx].id == id))
      throw std::logic_error("satellite index out of order");
    return sats[idx];
  }
};

/// LAV entity positions of one fleet under the transmitter mode (the
/// co-located leader is one entity even though it carries K antennas).
std::vector<GeodeticPos> fleet_entities(const ScenarioConfig& cfg,
                                        const FleetTrack& track, Instant t) {
  if (cfg.policy.transmitter == TransmitterMode::DistLav)
    return lav_positions(track, t);
  return {track_centroid(track, t)};
}

/// Transmit antenna positions of one fleet (columns of its channel).
std::vector<CartesianVec> fleet_antennas(const ScenarioConfig& cfg,
                                         const FleetTrack& track, Instant t) {
  std::vector<GeodeticPos> geos;
  switch (cfg.policy.transmitter) {
    case TransmitterMode::DistLav:
      geos = lav_positions(track, t);
      break;
    case TransmitterMode::SingleLav:
      geos = {track_centroid(track, t)};
      break;
    case TransmitterMode::CoLocatedLav:
      geos.assign(static_cast<size_t>(track.lav_count), track_centroid(track, t));
      break;
  }
  std::vector<CartesianVec> out;
  out.reserve(geos.size());
  for (const auto& g : geos) out.push_back(geodetic_to_cartesian(g));
  return out;
}

/// Centroid of every LAV entity across all fleets at the slot's time.
GeodeticPos scene_center(const World& w, long slot) {
  const Instant t = Instant::of_slot(slot, w.cfg.slot_duration_s);
  std::vector<GeodeticPos> all;
  for (const auto& f : w.cfg.fleets) {
    auto geos = fleet_entities(w.cfg, f, t);
    all.insert(all.end(), geos.begin(), geos.end());
  }
  return beam_center(all);
}

struct SlotWork {
  SlotMetrics metrics;  // rates unfilled until scored
  std::vector<StackedChannel> channels;
};

SlotWork prepare_slot(const World& w, long slot) {
  const ScenarioConfig& cfg = w.cfg;
  const Instant t = Instant::of_slot(slot, cfg.slot_duration_s);
  std::vector<SatelliteState> sats = propagate_all(w.shell, cfg.shell, t);

  std::vector<CartesianVec> centroids;
  std::vector<std::vector<CartesianVec>> tx;
  centroids.reserve(cfg.fleets.size());
  tx.reserve(cfg.fleets.size());
  for (const auto& f : cfg.fleets) {
    centroids.push_back(geodetic_to_cartesian(track_centroid(f, t)));
    tx.push_back(fleet_antennas(cfg, f, t));
  }

  const bool nadir = cfg.policy.variant == BeamVariant::EarthCenter;
  const long target_slot = beam_target_slot(cfg.policy.variant, slot, cfg.policy.frame_slots);
  const GeodeticPos center = scene_center(w, nadir ? slot : target_slot);

  SlotWork work;
  work.metrics.slot = slot;
  work.metrics.beam_center = center;

  const ArrayGeometry* array = &cfg.array;
  std::vector<SatelliteId> ids;
  switch (cfg.policy.receiver) {
    case ReceiverMode::DistSat:
      ids = select_serving_set(sats, center, cfg.policy.serving_count, cfg.min_elev_deg,
                               centroids, slot)
                .ids;
      break;
    case ReceiverMode::SingleSat:
      ids = select_serving_set(sats, center, 1, cfg.min_elev_deg, centroids, slot).ids;
      break;
    case ReceiverMode::CoLocatedSat: {
      std::vector<SatelliteState> candidates = sats;
      if (!nadir) point_beams(candidates, center);
      std::vector<CartesianVec> all_tx;
      for (const auto& fleet_tx : tx)
        all_tx.insert(all_tx.end(), fleet_tx.begin(), fleet_tx.end());
      ids = {best_channel_satellite(candidates, cfg.min_elev_deg, centroids, all_tx,
                                    cfg.pattern, cfg.link.carrier_ghz)};
      array = &w.colocated_array;
      break;
    }
  }

  std::vector<SatelliteState> serving;
  serving.reserve(ids.size());
  for (const auto& id : ids) serving.push_back(w.state_of(sats, id));
  if (!nadir) point_beams(serving, center);

  work.metrics.serving = ids;
  work.channels.reserve(cfg.fleets.size());
  for (size_t i = 0; i < cfg.fleets.size(); ++i)
    work.channels.push_back(assemble_channel(static_cast<int>(i), serving, tx[i], *array,
                                             cfg.pattern, cfg.link, cfg.master_seed,
                                             slot));
  return work;
}

void score_slot(const World& w, SlotWork& work) {
  const std::vector<double> powers(w.cfg.fleets.size(), w.cfg.power_w);
  RatePoint rp = slot_rates(work.channels, powers, w.cfg.link.noise_w);
  work.metrics.sinr = std::move(rp.sinr);
  work.metrics.rate_bps_hz = std::move(rp.rate_bps_hz);
  work.metrics.sum_rate_bps_hz = rp.sum_rate_bps_hz;
}

/// Runs fn(slot) for every slot on `threads` workers. Exceptions are
/// re-thrown after joining; the one from the lowest slot wins, so failures
/// are independent of scheduling.
void parallel_slots(long total, int threads, const std::function<void(long)>& fn) {
  const int n = static_cast<int>(std::clamp<long>(threads, 1, std::max<long>(1, total)));
  if (n == 1) {
    for (long s = 0; s < total; ++s) fn(s);
    return;
  }
  std::atomic<long> next{0};
  std::mutex mtx;
  std::exception_ptr first_error;
  long first_error_slot = total;
  auto worker = [&] {
    for (;;) {
      const long s = next.fetch_add(1);
      if (s >= total) return;
      try {
        fn(s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mtx);
        if (s < first_error_slot) {
          first_error_slot = s;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

void fold_handovers(std::vector<SlotMetrics>& slots) {
  for (size_t s = 1; s < slots.size(); ++s)
    slots[s].handover = !(slots[s].serving == slots[s - 1].serving);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ScenarioConfig with_receiver(ScenarioConfig cfg, ReceiverMode mode) {
  cfg.policy.receiver = mode;
  return cfg;
}

ScenarioConfig with_transmitter(ScenarioConfig cfg, TransmitterMode mode) {
  cfg.policy.transmitter = mode;
  return cfg;
}

}  // namespace

std::vector<SlotMetrics> run(const ScenarioConfig& cfg, const EngineOptions& opt) {
  World w(cfg);
  std::vector<SlotMetrics> out(static_cast<size_t>(cfg.horizon_slots));
  parallel_slots(cfg.horizon_slots, opt.threads, [&](long slot) {
    SlotWork work = prepare_slot(w, slot);
    score_slot(w, work);
    out[static_cast<size_t>(slot)] = std::move(work.metrics);
  });
  fold_handovers(out);
  return out;
}

std::vector<StackedChannel> slot_channels(const ScenarioConfig& cfg, long slot) {
  World w(cfg);
  if (slot < 0 || slot >= cfg.horizon_slots)
    throw std::invalid_argument("slot_channels: slot outside horizon");
  return prepare_slot(w, slot).channels;
}

ExperimentResult power_sweep(const ScenarioConfig& cfg, const std::vector<double>& powers,
                             const EngineOptions& opt) {
  if (powers.empty()) throw std::invalid_argument("power_sweep: no power levels");
  ExperimentResult res;
  res.kind = ExperimentKind::PowerSweep;
  res.fingerprint = config_fingerprint(cfg);
  struct Scheme {
    const char* name;
    ReceiverMode receiver;
    bool earth_center;
  };
  const Scheme schemes[] = {{"dist_sat", ReceiverMode::DistSat, false},
                            {"single_sat", ReceiverMode::SingleSat, false},
                            {"colocated_sat", ReceiverMode::CoLocatedSat, false},
                            {"dist_sat_ec", ReceiverMode::DistSat, true}};
  for (const auto& scheme : schemes) {
    ScenarioConfig sc = with_receiver(cfg, scheme.receiver);
    if (scheme.earth_center) sc.policy.variant = BeamVariant::EarthCenter;
    for (double p : powers) {
      sc.power_w = p;
      const auto slots = run(sc, opt);
      std::vector<double> sums;
      sums.reserve(slots.size());
      for (const auto& s : slots) sums.push_back(s.sum_rate_bps_hz);
      res.power_rows.push_back({scheme.name, p, mean(sums)});
    }
  }
  return res;
}

ExperimentResult min_power_experiment(const ScenarioConfig& cfg,
                                      const std::vector<double>& targets,
                                      const EngineOptions& opt) {
  ExperimentResult res;
  res.kind = ExperimentKind::MinPower;
  res.fingerprint = config_fingerprint(cfg);
  struct Variant {
    const char* name;
    TransmitterMode mode;
  };
  const Variant variants[] = {{"dist_lav", TransmitterMode::DistLav},
                              {"single_lav", TransmitterMode::SingleLav},
                              {"colocated_lav", TransmitterMode::CoLocatedLav}};
  for (const auto& variant : variants) {
    const ScenarioConfig sc = with_transmitter(cfg, variant.mode);
    World w(sc);
    std::vector<SlotChannels> slice(static_cast<size_t>(sc.horizon_slots));
    parallel_slots(sc.horizon_slots, opt.threads, [&](long slot) {
      slice[static_cast<size_t>(slot)].per_fleet = prepare_slot(w, slot).channels;
    });
    for (double target : targets) {
      const MinPowerResult r =
          min_power_for_rate(slice, target, PowerMetric::PerFleet, sc.link.noise_w);
      res.min_power_rows.push_back({variant.name, target, r.reachable, r.power_w});
    }
  }
  return res;
}

/// Slot where the fleets sit tightest around their shared beam center. The
/// service window is placed there so sustained-rate failures come from
/// satellite motion, not from the fleets' approach phase.
long compactness_anchor(const World& w) {
  long best = 0;
  double best_spread = std::numeric_limits<double>::infinity();
  for (long s = 0; s < w.cfg.horizon_slots; ++s) {
    const Instant t = Instant::of_slot(s, w.cfg.slot_duration_s);
    const CartesianVec center = geodetic_to_cartesian(scene_center(w, s));
    double spread = 0.0;
    for (const auto& f : w.cfg.fleets) {
      const CartesianVec c = geodetic_to_cartesian(track_centroid(f, t));
      spread = std::max(spread, slant_range_km(c, center));
    }
    if (spread < best_spread) {
      best_spread = spread;
      best = s;
    }
  }
  return best;
}

ExperimentResult service_experiment(const ScenarioConfig& cfg,
                                    const std::vector<double>& targets,
                                    const EngineOptions& opt) {
  (void)opt;  // the fold is inherently sequential
  ExperimentResult res;
  res.kind = ExperimentKind::Service;
  res.fingerprint = config_fingerprint(cfg);
  const long frame = std::min<long>(300, cfg.horizon_slots);
  struct Variant {
    const char* name;
    ReceiverMode mode;
  };
  const Variant variants[] = {{"dist_sat", ReceiverMode::DistSat},
                              {"colocated_sat", ReceiverMode::CoLocatedSat},
                              {"single_sat", ReceiverMode::SingleSat}};
  const long start = [&] {
    World w(cfg);
    const long anchor = compactness_anchor(w);
    return std::clamp<long>(anchor - frame / 2, 0, cfg.horizon_slots - frame);
  }();
  for (const auto& variant : variants) {
    // Beam pointing runs at slot level here; the experiment varies only the
    // receiving entity and its stickiness.
    ScenarioConfig sc = with_receiver(cfg, variant.mode);
    sc.policy.variant = BeamVariant::SlotLevel;
    World w(sc);
    ServiceHooks hooks;
    hooks.select = [&](long rel) { return prepare_slot(w, start + rel).metrics.serving; };
    hooks.fleet_rates = [&](long rel, const std::vector<SatelliteId>& entity) {
      const long slot = start + rel;
      const Instant t = Instant::of_slot(slot, sc.slot_duration_s);
      std::vector<SatelliteState> sats = propagate_all(w.shell, sc.shell, t);
      std::vector<SatelliteState> serving;
      serving.reserve(entity.size());
      for (const auto& id : entity) serving.push_back(w.state_of(sats, id));
      point_beams(serving, scene_center(w, slot));
      const ArrayGeometry& array = sc.policy.receiver == ReceiverMode::CoLocatedSat
                                       ? w.colocated_array
                                       : sc.array;
      std::vector<StackedChannel> channels;
      channels.reserve(sc.fleets.size());
      for (size_t i = 0; i < sc.fleets.size(); ++i) {
        const auto tx = fleet_antennas(sc, sc.fleets[i], t);
        channels.push_back(assemble_channel(static_cast<int>(i), serving, tx, array,
                                            sc.pattern, sc.link, sc.master_seed, slot));
      }
      const std::vector<double> powers(sc.fleets.size(), sc.power_w);
      return slot_rates(channels, powers, sc.link.noise_w).rate_bps_hz;
    };
    for (double target : targets) {
      const ServiceMetrics m = service_run(hooks, target, frame);
      res.service_rows.push_back(
          {variant.name, target, m.na, m.duration_slots, m.handover_count});
    }
  }
  return res;
}

ExperimentResult timescale_experiment(const ScenarioConfig& cfg,
                                      const std::vector<long>& frame_lengths,
                                      const EngineOptions& opt) {
  ExperimentResult res;
  res.kind = ExperimentKind::TimescaleCompare;
  res.fingerprint = config_fingerprint(cfg);
  struct Scheme {
    std::string name;
    BeamVariant variant;
    long frame_slots;  // 0 where not applicable
  };
  std::vector<Scheme> schemes = {{"slot_level", BeamVariant::SlotLevel, 0},
                                 {"fixed_initial", BeamVariant::FixedInitial, 0},
                                 {"earth_center", BeamVariant::EarthCenter, 0}};
  for (long n : frame_lengths) {
    if (n < 1) throw std::invalid_argument("timescale_experiment: frame length < 1");
    schemes.push_back(
        {"two_timescale_" + std::to_string(n), BeamVariant::TwoTimescale, n});
  }
  for (const auto& scheme : schemes) {
    ScenarioConfig sc = cfg;
    sc.policy.variant = scheme.variant;
    if (scheme.frame_slots > 0) sc.policy.frame_slots = scheme.frame_slots;
    const auto slots = run(sc, opt);
    TimescaleTrace trace;
    trace.scheme = scheme.name;
    trace.sum_rate_bps_hz.reserve(slots.size());
    for (const auto& s : slots) trace.sum_rate_bps_hz.push_back(s.sum_rate_bps_hz);
    const double avg = mean(trace.sum_rate_bps_hz);
    const long reports = position_report_count(scheme.variant, sc.horizon_slots,
                                               sc.policy.frame_slots);
    res.timescale_rows.push_back({scheme.name, scheme.frame_slots, avg, reports});
    res.traces.push_back(std::move(trace));
  }
  return res;
}

namespace {

std::string join_ids(const std::vector<SatelliteId>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += "|";
    out += std::to_string(ids[i].plane) + ":" + std::to_string(ids[i].slot);
  }
  return out;
}

}  // namespace

std::string run_csv(const ScenarioConfig& cfg, const std::vector<SlotMetrics>& slots) {
  const std::string fp = config_fingerprint(cfg);
  std::ostringstream out;
  std::vector<std::string> header = {"slot", "t_s", "serving", "beam_lat_deg",
                                     "beam_lon_deg"};
  for (size_t f = 0; f < cfg.fleets.size(); ++f) {
    header.push_back("sinr_f" + std::to_string(f + 1));
    header.push_back("rate_f" + std::to_string(f + 1) + "_bps_hz");
  }
  header.insert(header.end(), {"sum_rate_bps_hz", "handover", "fingerprint"});
  csv_row(out, header);
  for (const auto& s : slots) {
    std::vector<std::string> row = {
        std::to_string(s.slot),
        csv_num(static_cast<double>(s.slot) * cfg.slot_duration_s), join_ids(s.serving),
        csv_num(s.beam_center.lat_deg), csv_num(s.beam_center.lon_deg)};
    for (size_t f = 0; f < cfg.fleets.size(); ++f) {
      row.push_back(csv_num(s.sinr[f]));
      row.push_back(csv_num(s.rate_bps_hz[f]));
    }
    row.push_back(csv_num(s.sum_rate_bps_hz));
    row.push_back(s.handover ? "1" : "0");
    row.push_back(fp);
    csv_row(out, row);
  }
  return out.str();
}

std::string experiment_csv(const ExperimentResult& res) {
  std::ostringstream out;
  switch (res.kind) {
    case ExperimentKind::PowerSweep:
      csv_row(out, {"scheme", "power_w", "avg_sum_rate_bps_hz", "fingerprint"});
      for (const auto& r : res.power_rows)
        csv_row(out, {r.scheme, csv_num(r.power_w), csv_num(r.avg_sum_rate_bps_hz),
                      res.fingerprint});
      break;
    case ExperimentKind::MinPower:
      csv_row(out, {"transmitter", "target_bps_hz", "min_power_w", "fingerprint"});
      for (const auto& r : res.min_power_rows)
        csv_row(out, {r.transmitter, csv_num(r.target_bps_hz),
                      r.reachable ? csv_num(r.min_power_w) : "unreachable",
                      res.fingerprint});
      break;
    case ExperimentKind::Service:
      csv_row(out,
              {"receiver", "target_bps_hz", "na", "duration_slots", "handovers",
               "fingerprint"});
      for (const auto& r : res.service_rows)
        csv_row(out, {r.receiver, csv_num(r.target_bps_hz), r.na ? "1" : "0",
                      r.na ? "NA" : std::to_string(r.duration_slots),
                      r.na ? "NA" : std::to_string(r.handover_count), res.fingerprint});
      break;
    case ExperimentKind::TimescaleCompare:
      csv_row(out, {"scheme", "slot", "sum_rate_bps_hz", "avg_sum_rate_bps_hz",
                    "position_reports", "fingerprint"});
      for (size_t i = 0; i < res.timescale_rows.size(); ++i) {
        const auto& row = res.timescale_rows[i];
        const auto& trace = res.traces[i];
        for (size_t s = 0; s < trace.sum_rate_bps_hz.size(); ++s)
          csv_row(out,
                  {row.scheme, std::to_string(s), csv_num(trace.sum_rate_bps_hz[s]),
                   csv_num(row.avg_sum_rate_bps_hz), std::to_string(row.position_reports),
                   res.fingerprint});
      }
      break;
  }
  return out.str();
}

}  // namespace laesim
