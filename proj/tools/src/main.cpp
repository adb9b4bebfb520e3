#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "laesim/engine.hpp"
#include "laesim/scenario.hpp"

namespace {

using namespace laesim;

struct CommonArgs {
  std::string scenario_path;
  std::string out_path = "-";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--scenario", args->scenario_path,
                  "Scenario file; omitted means the built-in case study");
  cmd->add_option("--out", args->out_path, "Output CSV path, - for stdout");
  cmd->add_option("--threads", args->threads, "Slot-level worker threads")
      ->check(CLI::Range(1, 256));
}

ScenarioConfig load_scenario(const CommonArgs& args) {
  if (args.scenario_path.empty()) return default_scenario();
  std::ifstream in(args.scenario_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file " + args.scenario_path);
  std::ostringstream text;
  text << in.rdbuf();
  std::vector<std::string> notices;
  ScenarioConfig cfg = parse_scenario(text.str(), &notices);
  for (const auto& n : notices) std::cerr << "notice: " << n << "\n";
  return cfg;
}

/// Output stream for --out; files open in binary mode so rows end in LF
/// everywhere.
class OutStream {
 public:
  explicit OutStream(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    get().flush();
    if (file_.is_open() && !file_) throw std::runtime_error("write failed: " + path);
  }

 private:
  std::ofstream file_;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw std::runtime_error(flag + ": empty list");
  return out;
}

std::vector<long> parse_long_list(const std::string& text, const std::string& flag) {
  std::vector<long> out;
  for (double v : parse_list(text, flag)) {
    long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
      throw std::runtime_error(flag + ": expected integers");
    out.push_back(n);
  }
  return out;
}

int cmd_run(const CommonArgs& args, const std::string& dump_path) {
  const ScenarioConfig cfg = load_scenario(args);
  const auto slots = run(cfg, {args.threads});

  OutStream out(args.out_path);
  out.get() << run_csv(cfg, slots);
  out.finish(args.out_path);

  if (!dump_path.empty()) {
    std::ofstream dump(dump_path, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot open output file " + dump_path);
    bool header_done = false;
    for (long slot = 0; slot < cfg.horizon_slots; ++slot) {
      for (const auto& ch : slot_channels(cfg, slot)) {
        const int per_sat = static_cast<int>(
            ch.h.rows() / static_cast<Eigen::Index>(ch.serving_order.size()));
        const ArrayGeometry array{per_sat, 1, cfg.array.element_spacing};
        dump_channel_csv(dump, slot, ch, array, !header_done);
        header_done = true;
      }
    }
    if (!dump) throw std::runtime_error("write failed: " + dump_path);
  }
  return 0;
}

int emit_experiment(const CommonArgs& args, const ExperimentResult& res) {
  OutStream out(args.out_path);
  out.get() << experiment_csv(res);
  out.finish(args.out_path);
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& powers_text) {
  const ScenarioConfig cfg = load_scenario(args);
  const auto powers = parse_list(powers_text, "--powers");
  return emit_experiment(args, power_sweep(cfg, powers, {args.threads}));
}

int cmd_min_power(const CommonArgs& args, const std::string& targets_text) {
  const ScenarioConfig cfg = load_scenario(args);
  const auto targets = parse_list(targets_text, "--targets");
  return emit_experiment(args, min_power_experiment(cfg, targets, {args.threads}));
}

int cmd_service(const CommonArgs& args, const std::string& targets_text) {
  const ScenarioConfig cfg = load_scenario(args);
  const auto targets = parse_list(targets_text, "--targets");
  return emit_experiment(args, service_experiment(cfg, targets, {args.threads}));
}

int cmd_timescales(const CommonArgs& args, const std::string& frames_text) {
  const ScenarioConfig cfg = load_scenario(args);
  const auto frames = parse_long_list(frames_text, "--frames");
  return emit_experiment(args, timescale_experiment(cfg, frames, {args.threads}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite-assisted LAV uplink simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, min_args, service_args, ts_args;
  std::string dump_path;
  std::string powers = "1,5,10,20";
  std::string min_targets = "6,12,18";
  std::string service_targets = "6,12,18";
  std::string frames = "200,500,1000";

  CLI::App* c_run = app.add_subcommand("run", "Slot-by-slot metrics of one scenario");
  add_common(c_run, &run_args);
  c_run->add_option("--dump-channels", dump_path,
                    "Also dump per-slot channel matrices to this CSV path");

  CLI::App* c_sweep =
      app.add_subcommand("sweep-power", "Average sum rate across power levels");
  add_common(c_sweep, &sweep_args);
  c_sweep->add_option("--powers", powers, "Comma list of per-fleet powers, W");

  CLI::App* c_min =
      app.add_subcommand("min-power", "Minimum power meeting target rates");
  add_common(c_min, &min_args);
  c_min->add_option("--targets", min_targets, "Comma list of target rates, bps/Hz");

  CLI::App* c_service =
      app.add_subcommand("service", "Service duration and handovers per target");
  add_common(c_service, &service_args);
  c_service->add_option("--targets", service_targets,
                        "Comma list of target rates, bps/Hz");

  CLI::App* c_ts = app.add_subcommand("compare-timescales",
                                      "Sum-rate traces of the beam schedules");
  add_common(c_ts, &ts_args);
  c_ts->add_option("--frames", frames, "Comma list of frame lengths, slots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(run_args, dump_path);
    if (c_sweep->parsed()) return cmd_sweep(sweep_args, powers);
    if (c_min->parsed()) return cmd_min_power(min_args, min_targets);
    if (c_service->parsed()) return cmd_service(service_args, service_targets);
    if (c_ts->parsed()) return cmd_timescales(ts_args, frames);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
