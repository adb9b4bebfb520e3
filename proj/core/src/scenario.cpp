#include "laesim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace laesim {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::logic_error("fmt_double: to_chars failed");
  return std::string(buf, ptr);
}

std::string fmt_pair(const GeodeticPos& p) {
  return fmt_double(p.lat_deg) + "," + fmt_double(p.lon_deg);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw std::runtime_error("key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  double d = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(d))
    key_error(key, "cannot parse '" + v + "' as a number");
  return d;
}

long parse_long(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  long n = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    key_error(key, "cannot parse '" + v + "' as an integer");
  return n;
}

std::uint64_t parse_seed(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty() || t[0] == '-') key_error(key, "cannot parse '" + v + "' as a seed");
  char* end = nullptr;
  std::uint64_t n = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    key_error(key, "cannot parse '" + v + "' as a seed");
  return n;
}

void parse_latlon(const std::string& key, const std::string& v, GeodeticPos* p) {
  size_t comma = v.find(',');
  if (comma == std::string::npos)
    key_error(key, "expected 'lat,lon', got '" + v + "'");
  double lat = parse_double(key, v.substr(0, comma));
  double lon = parse_double(key, v.substr(comma + 1));
  if (lat < -90.0 || lat > 90.0)
    key_error(key, "latitude " + fmt_double(lat) + " out of range [-90, 90]");
  if (lon <= -180.0 || lon > 180.0)
    key_error(key, "longitude " + fmt_double(lon) + " out of range (-180, 180]");
  p->lat_deg = lat;
  p->lon_deg = lon;
}

double ranged_double(const std::string& key, const std::string& v, double lo,
                     double hi, bool lo_open = false) {
  double d = parse_double(key, v);
  bool bad = lo_open ? (d <= lo || d > hi) : (d < lo || d > hi);
  if (bad)
    key_error(key, "value " + fmt_double(d) + " out of range " +
                       (lo_open ? "(" : "[") + fmt_double(lo) + ", " + fmt_double(hi) +
                       "]");
  return d;
}

long ranged_long(const std::string& key, const std::string& v, long lo, long hi) {
  long n = parse_long(key, v);
  if (n < lo || n > hi)
    key_error(key, "value " + std::to_string(n) + " out of range [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return n;
}

FleetTrack default_fleet(int index) {
  FleetTrack t;
  t.speed_kms = 0.03;
  t.lav_count = 4;
  t.formation_radius_km = 0.1;
  t.start.alt_km = t.end.alt_km = 1.0;
  if (index % 2 == 0) {
    t.start.lat_deg = 51.48;
    t.start.lon_deg = -0.076;
    t.end.lat_deg = 50.48;
    t.end.lon_deg = -1.076;
  } else {
    t.start.lat_deg = 51.48;
    t.start.lon_deg = -1.076;
    t.end.lat_deg = 50.48;
    t.end.lon_deg = -0.076;
  }
  return t;
}

const std::map<std::string, BeamVariant> kVariantNames = {
    {"two_timescale", BeamVariant::TwoTimescale},
    {"slot_level", BeamVariant::SlotLevel},
    {"fixed_initial", BeamVariant::FixedInitial},
    {"earth_center", BeamVariant::EarthCenter}};

const std::map<std::string, ReceiverMode> kReceiverNames = {
    {"dist_sat", ReceiverMode::DistSat},
    {"single_sat", ReceiverMode::SingleSat},
    {"colocated_sat", ReceiverMode::CoLocatedSat}};

const std::map<std::string, TransmitterMode> kTransmitterNames = {
    {"dist_lav", TransmitterMode::DistLav},
    {"single_lav", TransmitterMode::SingleLav},
    {"colocated_lav", TransmitterMode::CoLocatedLav}};

template <typename T>
T parse_enum(const std::string& key, const std::string& v,
             const std::map<std::string, T>& names) {
  auto it = names.find(trim(v));
  if (it == names.end()) {
    std::string allowed;
    for (const auto& [name, val] : names) {
      if (!allowed.empty()) allowed += "|";
      allowed += name;
    }
    key_error(key, "unknown value '" + v + "' (allowed: " + allowed + ")");
  }
  return it->second;
}

template <typename T>
std::string enum_name(T val, const std::map<std::string, T>& names) {
  for (const auto& [name, v] : names)
    if (v == val) return name;
  throw std::logic_error("enum_name: unmapped value");
}

}  // namespace

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.fleets = {default_fleet(0), default_fleet(1)};
  return cfg;
}

void validate_scenario(const ScenarioConfig& cfg) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("invalid scenario: " + what);
  };
  require(cfg.shell.planes >= 1, "shell.planes must be >= 1");
  require(cfg.shell.sats_per_plane >= 1, "shell.sats_per_plane must be >= 1");
  require(cfg.shell.altitude_km > 0, "shell.altitude_km must be positive");
  require(cfg.shell.inclination_deg >= 0 && cfg.shell.inclination_deg <= 180,
          "shell.inclination_deg must lie in [0, 180]");
  require(cfg.shell.phasing_factor >= 0 && cfg.shell.phasing_factor < cfg.shell.planes,
          "shell.phasing must lie in [0, planes)");
  require(!cfg.fleets.empty(), "at least one fleet");
  for (const auto& f : cfg.fleets) {
    require(f.speed_kms > 0, "fleet speed must be positive");
    require(f.lav_count >= 1, "fleet k must be >= 1");
    require(f.formation_radius_km >= 0, "fleet formation radius must be >= 0");
    require(f.start.alt_km >= 0, "fleet altitude must be >= 0");
  }
  require(cfg.array.rows >= 1 && cfg.array.cols >= 1, "array dimensions must be >= 1");
  require(cfg.array.element_spacing > 0, "array spacing must be positive");
  require(cfg.pattern.half_beamwidth_deg > 0, "pattern hbw must be positive");
  require(cfg.pattern.sidelobe_suppression_db >= 0, "pattern sll must be >= 0");
  require(cfg.link.carrier_ghz > 0, "link frequency must be positive");
  require(cfg.link.noise_w > 0, "link noise must be positive");
  require(cfg.policy.frame_slots >= 1, "policy.frame_slots must be >= 1");
  require(cfg.policy.serving_count >= 1, "policy.m must be >= 1");
  require(cfg.policy.serving_count <= cfg.shell.planes * cfg.shell.sats_per_plane,
          "policy.m exceeds the shell size");
  require(cfg.horizon_slots >= 1, "sim.slots must be >= 1");
  require(cfg.slot_duration_s > 0, "sim.slot_s must be positive");
  require(cfg.min_elev_deg >= -90 && cfg.min_elev_deg <= 90,
          "sim.min_elev_deg must lie in [-90, 90]");
  require(cfg.power_w >= 0, "sim.power_w must be >= 0");
}

ScenarioConfig parse_scenario(const std::string& text,
                              std::vector<std::string>* notices) {
  std::map<std::string, std::string> pairs;
  {
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": expected key = value, got '" + line + "'");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
      if (!pairs.emplace(key, value).second)
        throw std::runtime_error("duplicate key '" + key + "'");
    }
  }

  int fleet_count = 2;
  if (auto it = pairs.find("sim.fleet_count"); it != pairs.end())
    fleet_count = static_cast<int>(ranged_long("sim.fleet_count", it->second, 1, 64));

  ScenarioConfig cfg;
  cfg.fleets.clear();
  for (int i = 0; i < fleet_count; ++i) cfg.fleets.push_back(default_fleet(i));

  auto take = [&](const std::string& key) -> const std::string* {
    auto it = pairs.find(key);
    return it == pairs.end() ? nullptr : &it->second;
  };
  auto note_default = [&](const std::string& key, const std::string& value) {
    if (notices) notices->push_back("defaulted " + key + " = " + value);
  };

  struct Handler {
    std::string key;
    std::function<void(const std::string&)> apply;
    std::function<std::string()> current;
  };
  std::vector<Handler> handlers;
  auto add = [&](std::string key, std::function<void(const std::string&)> apply,
                 std::function<std::string()> current) {
    handlers.push_back({std::move(key), std::move(apply), std::move(current)});
  };

  add("shell.planes",
      [&](const std::string& v) {
        cfg.shell.planes = static_cast<int>(ranged_long("shell.planes", v, 1, 10000));
      },
      [&] { return std::to_string(cfg.shell.planes); });
  add("shell.sats_per_plane",
      [&](const std::string& v) {
        cfg.shell.sats_per_plane =
            static_cast<int>(ranged_long("shell.sats_per_plane", v, 1, 10000));
      },
      [&] { return std::to_string(cfg.shell.sats_per_plane); });
  add("shell.altitude_km",
      [&](const std::string& v) {
        cfg.shell.altitude_km = ranged_double("shell.altitude_km", v, 0, 1e6, true);
      },
      [&] { return fmt_double(cfg.shell.altitude_km); });
  add("shell.inclination_deg",
      [&](const std::string& v) {
        cfg.shell.inclination_deg = ranged_double("shell.inclination_deg", v, 0, 180);
      },
      [&] { return fmt_double(cfg.shell.inclination_deg); });
  add("shell.phasing",
      [&](const std::string& v) {
        cfg.shell.phasing_factor =
            static_cast<int>(ranged_long("shell.phasing", v, 0, 9999));
      },
      [&] { return std::to_string(cfg.shell.phasing_factor); });
  add("shell.phase_deg",
      [&](const std::string& v) {
        cfg.shell.phase_offset_deg = parse_double("shell.phase_deg", v);
      },
      [&] { return fmt_double(cfg.shell.phase_offset_deg); });

  add("sim.fleet_count", [&](const std::string&) { /* consumed above */ },
      [&] { return std::to_string(fleet_count); });
  add("sim.slots",
      [&](const std::string& v) {
        cfg.horizon_slots = ranged_long("sim.slots", v, 1, 100000000);
      },
      [&] { return std::to_string(cfg.horizon_slots); });
  add("sim.slot_s",
      [&](const std::string& v) {
        cfg.slot_duration_s = ranged_double("sim.slot_s", v, 0, 1e6, true);
      },
      [&] { return fmt_double(cfg.slot_duration_s); });
  add("sim.min_elev_deg",
      [&](const std::string& v) {
        cfg.min_elev_deg = ranged_double("sim.min_elev_deg", v, -90, 90);
      },
      [&] { return fmt_double(cfg.min_elev_deg); });
  add("sim.seed",
      [&](const std::string& v) { cfg.master_seed = parse_seed("sim.seed", v); },
      [&] { return std::to_string(cfg.master_seed); });
  add("sim.power_w",
      [&](const std::string& v) {
        cfg.power_w = ranged_double("sim.power_w", v, 0, 1e12);
      },
      [&] { return fmt_double(cfg.power_w); });

  for (int i = 0; i < fleet_count; ++i) {
    const std::string base = "fleet." + std::to_string(i + 1) + ".";
    FleetTrack& f = cfg.fleets[static_cast<size_t>(i)];
    add(base + "start",
        [&f, base](const std::string& v) { parse_latlon(base + "start", v, &f.start); },
        [&f] { return fmt_pair(f.start); });
    add(base + "end",
        [&f, base](const std::string& v) { parse_latlon(base + "end", v, &f.end); },
        [&f] { return fmt_pair(f.end); });
    add(base + "speed_kms",
        [&f, base](const std::string& v) {
          f.speed_kms = ranged_double(base + "speed_kms", v, 0, 1e3, true);
        },
        [&f] { return fmt_double(f.speed_kms); });
    add(base + "k",
        [&f, base](const std::string& v) {
          f.lav_count = static_cast<int>(ranged_long(base + "k", v, 1, 1000));
        },
        [&f] { return std::to_string(f.lav_count); });
    add(base + "alt_km",
        [&f, base](const std::string& v) {
          f.start.alt_km = f.end.alt_km = ranged_double(base + "alt_km", v, 0, 100);
        },
        [&f] { return fmt_double(f.start.alt_km); });
    add(base + "formation_km",
        [&f, base](const std::string& v) {
          f.formation_radius_km = ranged_double(base + "formation_km", v, 0, 100);
        },
        [&f] { return fmt_double(f.formation_radius_km); });
  }

  add("array.rows",
      [&](const std::string& v) {
        cfg.array.rows = static_cast<int>(ranged_long("array.rows", v, 1, 1000));
      },
      [&] { return std::to_string(cfg.array.rows); });
  add("array.cols",
      [&](const std::string& v) {
        cfg.array.cols = static_cast<int>(ranged_long("array.cols", v, 1, 1000));
      },
      [&] { return std::to_string(cfg.array.cols); });
  add("array.spacing",
      [&](const std::string& v) {
        cfg.array.element_spacing = ranged_double("array.spacing", v, 0, 100, true);
      },
      [&] { return fmt_double(cfg.array.element_spacing); });

  add("pattern.peak_dbi",
      [&](const std::string& v) {
        cfg.pattern.peak_gain_dbi = ranged_double("pattern.peak_dbi", v, -100, 100);
      },
      [&] { return fmt_double(cfg.pattern.peak_gain_dbi); });
  add("pattern.hbw_deg",
      [&](const std::string& v) {
        cfg.pattern.half_beamwidth_deg = ranged_double("pattern.hbw_deg", v, 0, 90, true);
      },
      [&] { return fmt_double(cfg.pattern.half_beamwidth_deg); });
  add("pattern.sll_db",
      [&](const std::string& v) {
        cfg.pattern.sidelobe_suppression_db = ranged_double("pattern.sll_db", v, 0, 500);
      },
      [&] { return fmt_double(cfg.pattern.sidelobe_suppression_db); });

  add("link.freq_ghz",
      [&](const std::string& v) {
        cfg.link.carrier_ghz = ranged_double("link.freq_ghz", v, 0, 1000, true);
      },
      [&] { return fmt_double(cfg.link.carrier_ghz); });
  add("link.noise_w",
      [&](const std::string& v) {
        cfg.link.noise_w = ranged_double("link.noise_w", v, 0, 1, true);
      },
      [&] { return fmt_double(cfg.link.noise_w); });
  add("link.rician_db",
      [&](const std::string& v) {
        cfg.link.rician_k_db = ranged_double("link.rician_db", v, -300, 300);
      },
      [&] { return fmt_double(cfg.link.rician_k_db); });
  add("link.tx_gain_dbi",
      [&](const std::string& v) {
        cfg.link.tx_gain_dbi = ranged_double("link.tx_gain_dbi", v, -100, 100);
      },
      [&] { return fmt_double(cfg.link.tx_gain_dbi); });

  add("policy.variant",
      [&](const std::string& v) {
        cfg.policy.variant = parse_enum("policy.variant", v, kVariantNames);
      },
      [&] { return enum_name(cfg.policy.variant, kVariantNames); });
  add("policy.frame_slots",
      [&](const std::string& v) {
        cfg.policy.frame_slots = ranged_long("policy.frame_slots", v, 1, 100000000);
      },
      [&] { return std::to_string(cfg.policy.frame_slots); });
  add("policy.receiver",
      [&](const std::string& v) {
        cfg.policy.receiver = parse_enum("policy.receiver", v, kReceiverNames);
      },
      [&] { return enum_name(cfg.policy.receiver, kReceiverNames); });
  add("policy.m",
      [&](const std::string& v) {
        cfg.policy.serving_count = static_cast<int>(ranged_long("policy.m", v, 1, 10000));
      },
      [&] { return std::to_string(cfg.policy.serving_count); });
  add("policy.transmitter",
      [&](const std::string& v) {
        cfg.policy.transmitter = parse_enum("policy.transmitter", v, kTransmitterNames);
      },
      [&] { return enum_name(cfg.policy.transmitter, kTransmitterNames); });

  for (const auto& h : handlers) {
    if (const std::string* v = take(h.key))
      h.apply(*v);
    else
      note_default(h.key, h.current());
  }

  for (const auto& [key, value] : pairs) {
    bool known = false;
    for (const auto& h : handlers)
      if (h.key == key) {
        known = true;
        break;
      }
    if (!known) throw std::runtime_error("unknown key '" + key + "'");
  }

  validate_scenario(cfg);
  return cfg;
}

std::string emit_scenario(const ScenarioConfig& cfg) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  };
  line("shell.planes", std::to_string(cfg.shell.planes));
  line("shell.sats_per_plane", std::to_string(cfg.shell.sats_per_plane));
  line("shell.altitude_km", fmt_double(cfg.shell.altitude_km));
  line("shell.inclination_deg", fmt_double(cfg.shell.inclination_deg));
  line("shell.phasing", std::to_string(cfg.shell.phasing_factor));
  line("shell.phase_deg", fmt_double(cfg.shell.phase_offset_deg));
  line("sim.fleet_count", std::to_string(cfg.fleets.size()));
  line("sim.slots", std::to_string(cfg.horizon_slots));
  line("sim.slot_s", fmt_double(cfg.slot_duration_s));
  line("sim.min_elev_deg", fmt_double(cfg.min_elev_deg));
  line("sim.seed", std::to_string(cfg.master_seed));
  line("sim.power_w", fmt_double(cfg.power_w));
  for (size_t i = 0; i < cfg.fleets.size(); ++i) {
    const std::string base = "fleet." + std::to_string(i + 1) + ".";
    const FleetTrack& f = cfg.fleets[i];
    line(base + "start", fmt_pair(f.start));
    line(base + "end", fmt_pair(f.end));
    line(base + "speed_kms", fmt_double(f.speed_kms));
    line(base + "k", std::to_string(f.lav_count));
    line(base + "alt_km", fmt_double(f.start.alt_km));
    line(base + "formation_km", fmt_double(f.formation_radius_km));
  }
  line("array.rows", std::to_string(cfg.array.rows));
  line("array.cols", std::to_string(cfg.array.cols));
  line("array.spacing", fmt_double(cfg.array.element_spacing));
  line("pattern.peak_dbi", fmt_double(cfg.pattern.peak_gain_dbi));
  line("pattern.hbw_deg", fmt_double(cfg.pattern.half_beamwidth_deg));
  line("pattern.sll_db", fmt_double(cfg.pattern.sidelobe_suppression_db));
  line("link.freq_ghz", fmt_double(cfg.link.carrier_ghz));
  line("link.noise_w", fmt_double(cfg.link.noise_w));
  line("link.rician_db", fmt_double(cfg.link.rician_k_db));
  line("link.tx_gain_dbi", fmt_double(cfg.link.tx_gain_dbi));
  line("policy.variant", enum_name(cfg.policy.variant, kVariantNames));
  line("policy.frame_slots", std::to_string(cfg.policy.frame_slots));
  line("policy.receiver", enum_name(cfg.policy.receiver, kReceiverNames));
  line("policy.m", std::to_string(cfg.policy.serving_count));
  line("policy.transmitter", enum_name(cfg.policy.transmitter, kTransmitterNames));
  return out;
}

std::string config_fingerprint(const ScenarioConfig& cfg) {
  const std::string text = emit_scenario(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace laesim
