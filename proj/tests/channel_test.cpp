#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "laesim/channel.hpp"

using namespace laesim;

namespace {

SatelliteState make_sat(SatelliteId id, const CartesianVec& pos,
                        const CartesianVec& vel, const CartesianVec& aim_at) {
  SatelliteState s;
  s.id = id;
  s.position = pos;
  s.velocity = vel;
  s.boresight = normalized(aim_at - pos);
  return s;
}

const CartesianVec kLav{6371.0, 0.0, 0.0, Frame::EarthFixed};

double expected_amp(double rx_gain_db, double d_km, const LinkParams& link) {
  const double g_db = link.tx_gain_dbi + rx_gain_db - fspl_db(d_km, link.carrier_ghz);
  return std::sqrt(std::pow(10.0, g_db / 10.0));
}

}  // namespace

TEST_CASE("free space path loss") {
  CHECK(fspl_db(550.0, 20.0) == doctest::Approx(173.275636925047875).epsilon(1e-12));
  // Doubling the distance adds 20 log10(2).
  for (double d : {10.0, 550.0, 2000.0}) {
    CHECK(fspl_db(2.0 * d, 20.0) - fspl_db(d, 20.0) ==
          doctest::Approx(6.02059991327962390).epsilon(1e-12));
  }
  // Unit gain distance at 20 GHz, c / (4 pi f).
  CHECK(std::abs(fspl_db(1.19283628980923556e-6, 20.0)) < 1e-9);
  CHECK_THROWS(fspl_db(0.0, 20.0));
  CHECK_THROWS(fspl_db(-1.0, 20.0));
}

TEST_CASE("rng streams repeat and decorrelate") {
  RngStream a1(42, {3, 1, 4});
  RngStream a2(42, {3, 1, 4});
  for (int i = 0; i < 100; ++i) CHECK(a1.uniform() == a2.uniform());

  RngStream b(42, {3, 1, 5});
  RngStream a3(42, {3, 1, 4});
  bool same = true;
  for (int i = 0; i < 16; ++i) same = same && (a3.uniform() == b.uniform());
  CHECK_FALSE(same);

  RngStream s1(7, {0}), s2(7, {1});
  std::complex<double> acc{0.0, 0.0};
  double p1 = 0.0, p2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> z1 = s1.cnormal();
    const std::complex<double> z2 = s2.cnormal();
    acc += z1 * std::conj(z2);
    p1 += std::norm(z1);
    p2 += std::norm(z2);
  }
  CHECK(std::abs(acc) / n < 0.01);
  CHECK(p1 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(p2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rician limits") {
  Eigen::VectorXcd los(3);
  los << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0),
      std::complex<double>(-1.0, 0.0);

  RngStream rng(1, {9});
  const Eigen::VectorXcd pure = rician_fading(rng, 400.0, los);
  CHECK((pure - los).norm() < 1e-5);

  // k -> 0 leaves pure scatter with unit per-entry energy.
  RngStream rng2(1, {10});
  double energy = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    energy += rician_fading(rng2, -400.0, los).squaredNorm();
  }
  CHECK(energy / (3.0 * n) == doctest::Approx(1.0).epsilon(0.02));

  // Finite k keeps E||h||^2 = Ns.
  RngStream rng3(1, {11});
  energy = 0.0;
  for (int i = 0; i < n; ++i) {
    energy += rician_fading(rng3, 10.0, los).squaredNorm();
  }
  CHECK(energy / (3.0 * n) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("assembled channel pins the link budget") {
  const ArrayGeometry one{1, 1, 0.5};
  LinkParams link;
  link.rician_k_db = 400.0;  // clamps to pure LOS
  const std::vector<CartesianVec> lavs{kLav};

  SUBCASE("mainlobe overhead") {
    const BeamPattern pattern;
    const auto sat = make_sat({0, 0}, {6921.0, 0.0, 0.0, Frame::EarthFixed},
                              {0.0, 7.589, 0.0, Frame::EarthFixed}, kLav);
    const StackedChannel ch = assemble_channel(0, {sat}, lavs, one, pattern, link, 1, 0);
    REQUIRE(ch.h.rows() == 1);
    REQUIRE(ch.h.cols() == 1);
    const double amp = expected_amp(pattern.peak_gain_dbi, 550.0, link);
    CHECK(std::abs(ch.h(0, 0)) / amp == doctest::Approx(1.0).epsilon(1e-5));
  }

  SUBCASE("rolloff without a floor") {
    BeamPattern pattern;
    pattern.sidelobe_suppression_db = 1e9;
    const CartesianVec pos{6921.0, 100.0, 0.0, Frame::EarthFixed};
    auto sat = make_sat({0, 1}, pos, {0.0, 0.0, 7.589, Frame::EarthFixed}, kLav);
    // Point straight down instead of at the LAV to open an off-axis angle.
    sat.boresight = {-1.0, 0.0, 0.0, Frame::EarthFixed};
    const StackedChannel ch = assemble_channel(0, {sat}, lavs, one, pattern, link, 1, 0);
    const double psi = off_boresight_deg(pos, sat.boresight, kLav);
    const double d = slant_range_km(pos, kLav);
    const double amp = expected_amp(element_gain_db(psi, pattern), d, link);
    CHECK(std::abs(ch.h(0, 0)) / amp == doctest::Approx(1.0).epsilon(1e-5));
  }

  SUBCASE("transmit gain scales through") {
    const BeamPattern pattern;
    link.tx_gain_dbi = 3.0;
    const auto sat = make_sat({0, 0}, {6921.0, 0.0, 0.0, Frame::EarthFixed},
                              {0.0, 7.589, 0.0, Frame::EarthFixed}, kLav);
    const StackedChannel ch = assemble_channel(0, {sat}, lavs, one, pattern, link, 1, 0);
    const double amp = expected_amp(pattern.peak_gain_dbi, 550.0, link);
    CHECK(std::abs(ch.h(0, 0)) / amp == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("below horizon satellites fall to the pattern floor") {
  const ArrayGeometry one{1, 1, 0.5};
  const BeamPattern pattern;
  LinkParams link;
  link.rician_k_db = 400.0;
  const std::vector<CartesianVec> lavs{kLav};

  // Far around the limb; the boresight is aimed dead-on, yet no mainlobe
  // can reach through the planet.
  const CartesianVec pos = geodetic_to_cartesian({0.0, 120.0, 550.0});
  const auto sat = make_sat({2, 2}, pos, {0.0, 0.0, 7.589, Frame::EarthFixed}, kLav);
  REQUIRE(elevation_deg(kLav, pos) < 0.0);
  REQUIRE(off_boresight_deg(pos, sat.boresight, kLav) < 1e-9);

  const StackedChannel ch = assemble_channel(0, {sat}, lavs, one, pattern, link, 1, 0);
  const double d = slant_range_km(pos, kLav);
  const double floor_amp = expected_amp(
      pattern.peak_gain_dbi - pattern.sidelobe_suppression_db, d, link);
  CHECK(std::abs(ch.h(0, 0)) / floor_amp == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("assembly is deterministic in its arguments") {
  const ArrayGeometry geom{2, 2, 0.5};
  const BeamPattern pattern;
  const LinkParams link;
  const auto sat1 = make_sat({0, 3}, {6921.0, 40.0, 0.0, Frame::EarthFixed},
                             {0.0, 7.589, 0.0, Frame::EarthFixed}, kLav);
  const auto sat2 = make_sat({4, 1}, {6800.0, -300.0, 200.0, Frame::EarthFixed},
                             {0.0, 7.0, 2.0, Frame::EarthFixed}, kLav);
  const std::vector<CartesianVec> lavs{
      kLav, {6371.0, 0.2, 0.1, Frame::EarthFixed}};

  const StackedChannel a =
      assemble_channel(0, {sat1, sat2}, lavs, geom, pattern, link, 77, 5);
  const StackedChannel b =
      assemble_channel(0, {sat1, sat2}, lavs, geom, pattern, link, 77, 5);
  REQUIRE(a.h.rows() == 8);
  REQUIRE(a.h.cols() == 2);
  CHECK(a.h == b.h);
  REQUIRE(a.serving_order.size() == 2);
  CHECK(a.serving_order[0] == sat1.id);
  CHECK(a.serving_order[1] == sat2.id);

  const StackedChannel c =
      assemble_channel(0, {sat1, sat2}, lavs, geom, pattern, link, 77, 6);
  CHECK(a.h != c.h);
  const StackedChannel d =
      assemble_channel(1, {sat1, sat2}, lavs, geom, pattern, link, 77, 5);
  CHECK(a.h != d.h);
  const StackedChannel e =
      assemble_channel(0, {sat1, sat2}, lavs, geom, pattern, link, 78, 5);
  CHECK(a.h != e.h);
}

TEST_CASE("fading energy and per fleet independence") {
  const ArrayGeometry one{1, 1, 0.5};
  const BeamPattern pattern;
  const LinkParams link;  // 10 dB Rician
  const std::vector<CartesianVec> lavs{kLav};
  const CartesianVec pos = geodetic_to_cartesian({5.0, 0.0, 550.0});
  const auto sat = make_sat({1, 1}, pos, {0.0, 0.0, 7.589, Frame::EarthFixed}, kLav);

  const double psi = off_boresight_deg(pos, sat.boresight, kLav);
  const double d = slant_range_km(pos, kLav);
  const double g_db = link.tx_gain_dbi + element_gain_db(psi, pattern) -
                      fspl_db(d, link.carrier_ghz);
  const double g = std::pow(10.0, g_db / 10.0);
  const double k = std::pow(10.0, link.rician_k_db / 10.0);

  double energy = 0.0;
  std::complex<double> cross{0.0, 0.0};
  const int n = 100000;
  for (int slot = 0; slot < n; ++slot) {
    const StackedChannel f0 = assemble_channel(0, {sat}, lavs, one, pattern, link, 9, slot);
    const StackedChannel f1 = assemble_channel(1, {sat}, lavs, one, pattern, link, 9, slot);
    energy += std::norm(f0.h(0, 0));
    // Strip the common LOS mean; what remains are the per-fleet scatter draws.
    const std::complex<double> w0 =
        (f0.h(0, 0) / std::sqrt(g) - std::sqrt(k / (k + 1.0))) * std::sqrt(k + 1.0);
    const std::complex<double> w1 =
        (f1.h(0, 0) / std::sqrt(g) - std::sqrt(k / (k + 1.0))) * std::sqrt(k + 1.0);
    cross += w0 * std::conj(w1);
  }
  CHECK(energy / (n * g) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(cross) / n < 0.01);
}

TEST_CASE("empty serving set is rejected") {
  const ArrayGeometry one{1, 1, 0.5};
  CHECK_THROWS_AS(assemble_channel(0, {}, {kLav}, one, BeamPattern{}, LinkParams{}, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("channel dump layout") {
  const ArrayGeometry geom{2, 1, 0.5};
  const auto sat = make_sat({0, 0}, {6921.0, 0.0, 0.0, Frame::EarthFixed},
                            {0.0, 7.589, 0.0, Frame::EarthFixed}, kLav);
  const std::vector<CartesianVec> lavs{kLav, {6371.0, 0.1, 0.0, Frame::EarthFixed}};
  const StackedChannel ch =
      assemble_channel(0, {sat}, lavs, geom, BeamPattern{}, LinkParams{}, 1, 3);

  std::ostringstream os;
  dump_channel_csv(os, 3, ch, geom, true);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "slot,fleet,sat_plane,sat_slot,lav,element,re,im");
  int rows = 0;
  while (std::getline(is, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 2 * 2);  // Ns elements x K LAVs
}
