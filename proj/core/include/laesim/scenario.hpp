#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laesim/antenna.hpp"
#include "laesim/channel.hpp"
#include "laesim/constellation.hpp"
#include "laesim/control.hpp"
#include "laesim/geo.hpp"

namespace laesim {

struct ScenarioConfig {
  ShellConfig shell;
  std::vector<FleetTrack> fleets;
  ArrayGeometry array;
  BeamPattern pattern;
  LinkParams link;
  Policy policy;
  long horizon_slots = 1800;
  double slot_duration_s = 2.0;
  double min_elev_deg = 30.0;
  std::uint64_t master_seed = 1;
  double power_w = 20.0;  // per-fleet transmit budget
};

/// Built-in case study: two four-LAV fleets on crossing southbound tracks
/// under the 22x72 shell, one hour in 2 s slots.
ScenarioConfig default_scenario();

/// Parses the flat key=value dialect (# comments, blank lines allowed).
/// Unknown keys, duplicates, and out-of-range values raise std::runtime_error
/// naming the key; keys that fall back to defaults each add a line to
/// `notices` when non-null.
ScenarioConfig parse_scenario(const std::string& text,
                              std::vector<std::string>* notices = nullptr);

/// Canonical text form listing every key; doubles use the shortest exact
/// round-trip form, so parse(emit(c)) reproduces c field for field.
std::string emit_scenario(const ScenarioConfig& cfg);

/// FNV-1a 64 of the canonical form, 16 hex digits.
std::string config_fingerprint(const ScenarioConfig& cfg);

void validate_scenario(const ScenarioConfig& cfg);

}  // namespace laesim
