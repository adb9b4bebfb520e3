#include "laesim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "laesim/csv.hpp"

namespace laesim {

namespace {
// c expressed in km * GHz so the FSPL argument is dimensionless
constexpr double kSpeedOfLightKmGhz = 2.99792458e-4;
}  // namespace

double fspl_db(double d_km, double f_ghz) {
  if (d_km <= 0.0) throw std::invalid_argument("fspl_db: distance must be positive");
  if (f_ghz <= 0.0) throw std::invalid_argument("fspl_db: frequency must be positive");
  return 20.0 * std::log10(4.0 * kPi * d_km * f_ghz / kSpeedOfLightKmGhz);
}

Eigen::VectorXcd rician_fading(RngStream& rng, double k_db,
                               const Eigen::VectorXcd& los) {
  const double k = std::clamp(std::pow(10.0, k_db / 10.0), 1e-12, 1e12);
  const double los_scale = std::sqrt(k / (k + 1.0));
  const double nlos_scale = std::sqrt(1.0 / (k + 1.0));
  Eigen::VectorXcd out(los.size());
  for (Eigen::Index i = 0; i < los.size(); ++i) {
    out(i) = los_scale * los(i) + nlos_scale * rng.cnormal();
  }
  return out;
}

StackedChannel assemble_channel(int fleet_index,
                                const std::vector<SatelliteState>& serving,
                                const std::vector<CartesianVec>& lav_positions,
                                const ArrayGeometry& array, const BeamPattern& pattern,
                                const LinkParams& link, std::uint64_t master_seed,
                                long slot) {
  if (serving.empty()) {
    throw std::invalid_argument("assemble_channel: empty serving set");
  }
  const int ns = array.count();
  const int k = static_cast<int>(lav_positions.size());
  StackedChannel ch;
  ch.fleet = fleet_index;
  ch.h.resize(static_cast<Eigen::Index>(serving.size()) * ns, k);
  ch.serving_order.reserve(serving.size());

  for (size_t m = 0; m < serving.size(); ++m) {
    const SatelliteState& sat = serving[m];
    ch.serving_order.push_back(sat.id);
    const LocalFrame frame = LocalFrame::from(sat.boresight, sat.velocity);
    for (int u = 0; u < k; ++u) {
      const CartesianVec& lav = lav_positions[u];
      const double d = slant_range_km(sat.position, lav);
      // A satellite below the local horizon cannot aim its mainlobe at the
      // LAV; its contribution is capped at the pattern floor.
      double rx_gain_db;
      if (elevation_deg(lav, sat.position) < 0.0) {
        rx_gain_db = pattern.peak_gain_dbi - pattern.sidelobe_suppression_db;
      } else {
        const double psi = off_boresight_deg(sat.position, sat.boresight, lav);
        rx_gain_db = element_gain_db(psi, pattern);
      }
      const double gain_db =
          link.tx_gain_dbi + rx_gain_db - fspl_db(d, link.carrier_ghz);
      const double amp = std::sqrt(std::pow(10.0, gain_db / 10.0));
      const Eigen::Vector3d dir = frame.to_local(normalized(lav - sat.position));
      const Eigen::VectorXcd los = steering_vector(array, dir);
      RngStream rng(master_seed,
                    {static_cast<std::uint64_t>(slot),
                     static_cast<std::uint64_t>(sat.id.plane),
                     static_cast<std::uint64_t>(sat.id.slot),
                     static_cast<std::uint64_t>(fleet_index),
                     static_cast<std::uint64_t>(u)});
      ch.h.block(static_cast<Eigen::Index>(m) * ns, u, ns, 1) =
          amp * rician_fading(rng, link.rician_k_db, los);
    }
  }
  return ch;
}

void dump_channel_csv(std::ostream& out, long slot, const StackedChannel& ch,
                      const ArrayGeometry& array, bool header) {
  if (header) {
    out << "slot,fleet,sat_plane,sat_slot,lav,element,re,im\n";
  }
  const int ns = array.count();
  for (Eigen::Index r = 0; r < ch.h.rows(); ++r) {
    const SatelliteId sat = ch.serving_order[static_cast<size_t>(r) / ns];
    for (Eigen::Index c = 0; c < ch.h.cols(); ++c) {
      out << slot << ',' << ch.fleet << ',' << sat.plane << ',' << sat.slot << ','
          << c << ',' << r % ns << ',' << csv_num(ch.h(r, c).real()) << ','
          << csv_num(ch.h(r, c).imag()) << '\n';
    }
  }
}

}  // namespace laesim
