#pragma once

#include <string>
#include <vector>

#include "laesim/control.hpp"
#include "laesim/mimo.hpp"
#include "laesim/scenario.hpp"

namespace laesim {

struct SlotMetrics {
  long slot = 0;
  std::vector<SatelliteId> serving;
  GeodeticPos beam_center;          // selection center used at this slot
  std::vector<double> sinr;         // per fleet, linear
  std::vector<double> rate_bps_hz;  // per fleet
  double sum_rate_bps_hz = 0.0;
  bool handover = false;            // serving entity changed since last slot
};

struct EngineOptions {
  int threads = 1;  // slot-level workers; output is thread-count independent
};

/// Full horizon under the configured policy: propagate, move fleets, apply
/// the beam schedule, select the serving entity, assemble channels, and
/// compute MRT/MMSE rates per slot. Deterministic in (config, seed).
std::vector<SlotMetrics> run(const ScenarioConfig& cfg, const EngineOptions& opt = {});

/// Per-fleet stacked channels the run would use at one slot (debug dumps).
std::vector<StackedChannel> slot_channels(const ScenarioConfig& cfg, long slot);

enum class ExperimentKind { PowerSweep, MinPower, Service, TimescaleCompare };

struct PowerSweepRow {
  std::string scheme;
  double power_w = 0.0;
  double avg_sum_rate_bps_hz = 0.0;
};

struct MinPowerRow {
  std::string transmitter;
  double target_bps_hz = 0.0;
  bool reachable = false;
  double min_power_w = 0.0;
};

struct ServiceRow {
  std::string receiver;
  double target_bps_hz = 0.0;
  bool na = false;
  long duration_slots = 0;
  long handover_count = 0;
};

struct TimescaleRow {
  std::string scheme;
  long frame_slots = 0;  // 0 where no frame length applies
  double avg_sum_rate_bps_hz = 0.0;
  long position_reports = 0;
};

struct TimescaleTrace {
  std::string scheme;
  std::vector<double> sum_rate_bps_hz;  // per slot
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::PowerSweep;
  std::string fingerprint;  // of the base config
  std::vector<PowerSweepRow> power_rows;
  std::vector<MinPowerRow> min_power_rows;
  std::vector<ServiceRow> service_rows;
  std::vector<TimescaleRow> timescale_rows;
  std::vector<TimescaleTrace> traces;
};

/// Horizon-averaged sum rate per power level for the receive-side schemes
/// dist_sat, single_sat, colocated_sat, and dist_sat_ec (distributed set
/// with Earth-center beams). Fading is shared across rows.
ExperimentResult power_sweep(const ScenarioConfig& cfg, const std::vector<double>& powers,
                             const EngineOptions& opt = {});

/// Smallest per-fleet budget meeting each target (time-averaged worst fleet
/// rate) for dist_lav, single_lav, and colocated_lav transmitters.
ExperimentResult min_power_experiment(const ScenarioConfig& cfg,
                                      const std::vector<double>& targets,
                                      const EngineOptions& opt = {});

/// Sticky-entity service duration and handovers over one 300-slot frame for
/// dist_sat, colocated_sat, and single_sat receivers at each target.
ExperimentResult service_experiment(const ScenarioConfig& cfg,
                                    const std::vector<double>& targets,
                                    const EngineOptions& opt = {});

/// Sum-rate traces, horizon averages, and position-report counts for
/// slot_level, fixed_initial, earth_center, and two_timescale at each frame
/// length.
ExperimentResult timescale_experiment(const ScenarioConfig& cfg,
                                      const std::vector<long>& frame_lengths,
                                      const EngineOptions& opt = {});

/// Slot-by-slot metrics table, one row per slot, LF line endings.
std::string run_csv(const ScenarioConfig& cfg, const std::vector<SlotMetrics>& slots);

/// CSV table of an experiment result; columns depend on the experiment kind.
std::string experiment_csv(const ExperimentResult& res);

}  // namespace laesim
