#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "laesim/control.hpp"

using namespace laesim;

TEST_CASE("beam target slot per variant") {
  CHECK(beam_target_slot(BeamVariant::TwoTimescale, 0, 200) == 0);
  CHECK(beam_target_slot(BeamVariant::TwoTimescale, 199, 200) == 0);
  CHECK(beam_target_slot(BeamVariant::TwoTimescale, 200, 200) == 200);
  CHECK(beam_target_slot(BeamVariant::TwoTimescale, 1799, 200) == 1600);
  CHECK(beam_target_slot(BeamVariant::SlotLevel, 137, 200) == 137);
  CHECK(beam_target_slot(BeamVariant::FixedInitial, 137, 200) == 0);
  CHECK(beam_target_slot(BeamVariant::EarthCenter, 137, 200) == 137);
  CHECK_THROWS(beam_target_slot(BeamVariant::TwoTimescale, -1, 200));
  CHECK_THROWS(beam_target_slot(BeamVariant::TwoTimescale, 5, 0));
}

TEST_CASE("position report counts") {
  CHECK(position_report_count(BeamVariant::TwoTimescale, 1800, 200) == 9);
  CHECK(position_report_count(BeamVariant::TwoTimescale, 1800, 1800) == 1);
  CHECK(position_report_count(BeamVariant::TwoTimescale, 1800, 7) == 258);
  CHECK(position_report_count(BeamVariant::TwoTimescale, 0, 200) == 0);
  CHECK(position_report_count(BeamVariant::SlotLevel, 1800, 200) == 1800);
  CHECK(position_report_count(BeamVariant::FixedInitial, 1800, 200) == 1);
  CHECK(position_report_count(BeamVariant::FixedInitial, 0, 200) == 0);
  CHECK(position_report_count(BeamVariant::EarthCenter, 1800, 200) == 0);
}

TEST_CASE("beam center averages positions") {
  const GeodeticPos a{51.48, -0.076, 1.0};
  const GeodeticPos b{51.48, -1.076, 1.0};
  const std::vector<GeodeticPos> pair{a, b};
  const GeodeticPos c = beam_center(pair);
  CHECK(c.lat_deg == doctest::Approx(51.48).epsilon(1e-12));
  CHECK(c.lon_deg == doctest::Approx(-0.576).epsilon(1e-12));
  CHECK(c.alt_km == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<GeodeticPos> solo{a};
  const GeodeticPos cs = beam_center(solo);
  CHECK(cs.lat_deg == a.lat_deg);
  CHECK(cs.lon_deg == a.lon_deg);

  CHECK_THROWS(beam_center({}));
}

TEST_CASE("point beams aims boresights at the center") {
  std::vector<SatelliteState> sats(1);
  sats[0].position = {7000.0, 0.0, 0.0, Frame::EarthFixed};
  sats[0].velocity = {0.0, 7.589, 0.0, Frame::EarthFixed};
  sats[0].boresight = {-1.0, 0.0, 0.0, Frame::EarthFixed};
  const GeodeticPos center{0.0, 0.0, 0.0};
  point_beams(sats, center);
  const CartesianVec target = geodetic_to_cartesian(center);
  CHECK(off_boresight_deg(sats[0].position, sats[0].boresight, target) < 1e-9);
  CHECK(norm(sats[0].boresight) == doctest::Approx(1.0).epsilon(1e-12));
}

namespace {

SatelliteState sat_at(int plane, int slot, double radius_km, double y_km) {
  SatelliteState s;
  s.id = {plane, slot};
  s.position = {radius_km, y_km, 0.0, Frame::EarthFixed};
  s.velocity = {0.0, 7.589, 0.0, Frame::EarthFixed};
  s.boresight = normalized(CartesianVec{-1.0, 0.0, 0.0, Frame::EarthFixed});
  return s;
}

}  // namespace

TEST_CASE("serving set orders by range then id") {
  // All four sit high above the centroid, at staggered radii.
  std::vector<SatelliteState> sats;
  sats.push_back(sat_at(0, 0, 6371.0 + 300.0, 0.0));
  sats.push_back(sat_at(1, 5, 6371.0 + 200.0, 0.0));
  sats.push_back(sat_at(0, 7, 6371.0 + 200.0, 0.0));
  sats.push_back(sat_at(2, 0, 6371.0 + 500.0, 0.0));
  const GeodeticPos center{0.0, 0.0, 0.0};
  const std::vector<CartesianVec> centroids{geodetic_to_cartesian(center)};

  const ServingSet set = select_serving_set(sats, center, 3, 30.0, centroids, 12);
  CHECK(set.slot == 12);
  REQUIRE(set.ids.size() == 3);
  CHECK(set.ids[0] == SatelliteId{0, 7});
  CHECK(set.ids[1] == SatelliteId{1, 5});
  CHECK(set.ids[2] == SatelliteId{0, 0});

  // Asking for more than the sky holds names the slot in the error.
  try {
    select_serving_set(sats, center, 5, 30.0, centroids, 7);
    FAIL("expected a visibility error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("insufficient visibility") != std::string::npos);
    CHECK(msg.find("7") != std::string::npos);
  }
}

TEST_CASE("serving set respects every fleet centroid") {
  // One satellite overhead for centroid A but under the horizon for a
  // centroid on the far side.
  std::vector<SatelliteState> sats{sat_at(0, 0, 6921.0, 0.0)};
  const GeodeticPos center{0.0, 0.0, 0.0};
  const std::vector<CartesianVec> near{geodetic_to_cartesian(center)};
  const std::vector<CartesianVec> split{
      geodetic_to_cartesian(center), geodetic_to_cartesian({0.0, 150.0, 0.0})};

  CHECK(select_serving_set(sats, center, 1, 30.0, near, 0).ids.size() == 1);
  CHECK_THROWS(select_serving_set(sats, center, 1, 30.0, split, 0));
}

TEST_CASE("best channel satellite prefers the stronger sum gain") {
  const CartesianVec lav = geodetic_to_cartesian({0.0, 0.0, 0.0});
  const std::vector<CartesianVec> lavs{lav};
  const std::vector<CartesianVec> centroids{lav};
  const BeamPattern pattern;

  std::vector<SatelliteState> sats;
  sats.push_back(sat_at(0, 1, 6921.0, 0.0));
  SatelliteState far;
  far.id = {0, 2};
  far.position = geodetic_to_cartesian({5.0, 0.0, 550.0});
  far.velocity = {0.0, 0.0, 7.589, Frame::EarthFixed};
  far.boresight = normalized(lav - far.position);
  sats.push_back(far);
  // Both boresights point at the LAV; the nearer one loses less to path.
  sats[0].boresight = normalized(lav - sats[0].position);

  CHECK(best_channel_satellite(sats, 30.0, centroids, lavs, pattern, 20.0) ==
        SatelliteId{0, 1});

  // Identical geometry ties break on the smaller id.
  std::vector<SatelliteState> twins;
  twins.push_back(sat_at(1, 0, 6921.0, 0.0));
  twins.push_back(sat_at(0, 3, 6921.0, 0.0));
  for (auto& s : twins) s.boresight = normalized(lav - s.position);
  CHECK(best_channel_satellite(twins, 30.0, centroids, lavs, pattern, 20.0) ==
        SatelliteId{0, 3});
}

TEST_CASE("service fold lifecycle") {
  const SatelliteId a{0, 0};
  const SatelliteId b{1, 1};

  SUBCASE("sustained for the whole frame") {
    ServiceHooks hooks;
    hooks.select = [&](long) { return std::vector<SatelliteId>{a}; };
    hooks.fleet_rates = [&](long, const std::vector<SatelliteId>&) {
      return std::vector<double>{5.0, 5.0};
    };
    const ServiceMetrics m = service_run(hooks, 3.0, 300);
    CHECK_FALSE(m.na);
    CHECK(m.duration_slots == 300);
    CHECK(m.handover_count == 0);
  }

  SUBCASE("one failure hands over once") {
    ServiceHooks hooks;
    hooks.select = [&](long slot) {
      return std::vector<SatelliteId>{slot >= 150 ? b : a};
    };
    hooks.fleet_rates = [&](long slot, const std::vector<SatelliteId>& e) {
      if (e[0] == a && slot >= 150) return std::vector<double>{1.0};
      return std::vector<double>{5.0};
    };
    const ServiceMetrics m = service_run(hooks, 3.0, 300);
    CHECK_FALSE(m.na);
    CHECK(m.duration_slots == 150);
    CHECK(m.handover_count == 1);
  }

  SUBCASE("slot zero failure reports not available") {
    ServiceHooks hooks;
    hooks.select = [&](long) { return std::vector<SatelliteId>{a}; };
    hooks.fleet_rates = [&](long, const std::vector<SatelliteId>&) {
      return std::vector<double>{1.0};
    };
    const ServiceMetrics m = service_run(hooks, 3.0, 300);
    CHECK(m.na);
    CHECK(m.duration_slots == 0);
    CHECK(m.handover_count == 0);
  }

  SUBCASE("persistent failure hands over every slot") {
    ServiceHooks hooks;
    hooks.select = [&](long) { return std::vector<SatelliteId>{a}; };
    hooks.fleet_rates = [&](long slot, const std::vector<SatelliteId>&) {
      return std::vector<double>{slot == 0 ? 5.0 : 1.0};
    };
    const ServiceMetrics m = service_run(hooks, 3.0, 300);
    CHECK_FALSE(m.na);
    CHECK(m.duration_slots == 1);
    CHECK(m.handover_count == 299);
  }

  SUBCASE("recovered entity does not extend the initial duration") {
    ServiceHooks hooks;
    hooks.select = [&](long slot) {
      return std::vector<SatelliteId>{slot >= 100 ? b : a};
    };
    hooks.fleet_rates = [&](long slot, const std::vector<SatelliteId>& e) {
      if (e[0] == a && slot == 100) return std::vector<double>{1.0};
      if (e[0] == b && slot == 200) return std::vector<double>{1.0};
      return std::vector<double>{5.0};
    };
    const ServiceMetrics m = service_run(hooks, 3.0, 300);
    CHECK_FALSE(m.na);
    CHECK(m.duration_slots == 100);
    CHECK(m.handover_count == 2);
  }

  SUBCASE("zero target holds for the frame") {
    ServiceHooks hooks;
    hooks.select = [&](long) { return std::vector<SatelliteId>{a}; };
    hooks.fleet_rates = [&](long, const std::vector<SatelliteId>&) {
      return std::vector<double>{0.0, 0.0};
    };
    const ServiceMetrics m = service_run(hooks, 0.0, 300);
    CHECK_FALSE(m.na);
    CHECK(m.duration_slots == 300);
    CHECK(m.handover_count == 0);
  }

  SUBCASE("bad frame length throws") {
    ServiceHooks hooks;
    CHECK_THROWS(service_run(hooks, 1.0, 0));
  }
}

TEST_CASE("service duration shrinks as the target rises") {
  // A rate that decays over the frame: tighter targets end the streak sooner.
  ServiceHooks hooks;
  const SatelliteId a{0, 0};
  hooks.select = [&](long) { return std::vector<SatelliteId>{a}; };
  hooks.fleet_rates = [&](long slot, const std::vector<SatelliteId>&) {
    return std::vector<double>{10.0 - 0.05 * static_cast<double>(slot)};
  };
  long last = 301;
  for (double target : {1.0, 4.0, 7.0, 9.0}) {
    const ServiceMetrics m = service_run(hooks, target, 300);
    CHECK(m.duration_slots <= last);
    last = m.duration_slots;
  }
  CHECK(service_run(hooks, 7.0, 300).duration_slots == 61);
}
