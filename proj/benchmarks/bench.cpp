#include <benchmark/benchmark.h>

#include <vector>

#include "laesim/engine.hpp"
#include "laesim/rng.hpp"

using namespace laesim;

namespace {

// One fleet's stacked channel at a mid-scenario slot, default geometry.
std::vector<StackedChannel> sample_channels(long slot) {
  return slot_channels(default_scenario(), slot);
}

void bm_assemble_channel(benchmark::State& state) {
  const ScenarioConfig cfg = default_scenario();
  const auto els = build_shell(cfg.shell);
  const Instant t = Instant::of_slot(900, cfg.slot_duration_s);
  auto sats = propagate_all(els, cfg.shell, t);
  const auto lavs_geo = lav_positions(cfg.fleets[0], t);
  std::vector<CartesianVec> lavs;
  for (const auto& g : lavs_geo) lavs.push_back(geodetic_to_cartesian(g));
  const GeodeticPos center = beam_center(lavs_geo);
  std::vector<CartesianVec> centroids{
      geodetic_to_cartesian(track_centroid(cfg.fleets[0], t)),
      geodetic_to_cartesian(track_centroid(cfg.fleets[1], t))};
  const ServingSet set =
      select_serving_set(sats, center, cfg.policy.serving_count, cfg.min_elev_deg,
                         centroids, 900);
  std::vector<SatelliteState> serving;
  for (const auto& id : set.ids) {
    for (const auto& s : sats) {
      if (s.id == id) serving.push_back(s);
    }
  }
  point_beams(serving, center);
  long slot = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_channel(0, serving, lavs, cfg.array,
                                              cfg.pattern, cfg.link,
                                              cfg.master_seed, slot++));
  }
}
BENCHMARK(bm_assemble_channel);

void bm_slot_rates(benchmark::State& state) {
  const auto channels = sample_channels(900);
  const std::vector<double> powers(channels.size(), 20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slot_rates(channels, powers, 4e-14));
  }
}
BENCHMARK(bm_slot_rates);

void bm_rates_at_power(benchmark::State& state) {
  const auto channels = sample_channels(900);
  const SlotEffective eff = effective_directions(channels);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rates_at_power(eff, 20.0, 4e-14));
  }
}
BENCHMARK(bm_rates_at_power);

void bm_mmse_combiner(benchmark::State& state) {
  const auto channels = sample_channels(900);
  std::vector<Eigen::VectorXcd> eff;
  for (const auto& ch : channels) {
    eff.push_back(ch.h * mrt_precoder(ch, 20.0).w);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmse_combiner(eff, 0, 4e-14));
  }
}
BENCHMARK(bm_mmse_combiner);

void bm_propagate_shell(benchmark::State& state) {
  const ScenarioConfig cfg = default_scenario();
  const auto els = build_shell(cfg.shell);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_all(els, cfg.shell, Instant{t}));
    t += 2.0;
  }
}
BENCHMARK(bm_propagate_shell);

void bm_full_slot(benchmark::State& state) {
  const ScenarioConfig cfg = default_scenario();
  long slot = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slot_channels(cfg, slot));
    slot = (slot + 1) % cfg.horizon_slots;
  }
}
BENCHMARK(bm_full_slot);

}  // namespace

BENCHMARK_MAIN();
