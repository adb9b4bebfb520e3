#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "laesim/antenna.hpp"
#include "laesim/constellation.hpp"
#include "laesim/geo.hpp"
#include "laesim/rng.hpp"

namespace laesim {

struct LinkParams {
  double carrier_ghz = 20.0;
  double noise_w = 4.0e-14;   // sigma^2
  double rician_k_db = 10.0;
  double tx_gain_dbi = 0.0;   // LAV side
};

/// Free-space path loss, 20 log10(4 pi d f / c), d in km and f in GHz.
double fspl_db(double d_km, double f_ghz);

/// Rician small-scale vector: sqrt(k/(k+1)) los + sqrt(1/(k+1)) w with
/// w ~ CN(0, I). The linear factor k is clamped to [1e-12, 1e12].
Eigen::VectorXcd rician_fading(RngStream& rng, double k_db,
                               const Eigen::VectorXcd& los);

/// One satellite's slice of a fleet channel, Ns x K.
struct ChannelBlock {
  SatelliteId sat;
  int fleet = 0;
  Eigen::MatrixXcd coefficients;
};

/// Joint channel of one fleet at one slot: the M serving satellites' blocks
/// stacked vertically in serving-set order, (M Ns) x K.
struct StackedChannel {
  int fleet = 0;
  Eigen::MatrixXcd h;
  std::vector<SatelliteId> serving_order;
};

/// Assembles the stacked channel for one fleet. Entry (sat m, LAV u) column
/// segments are sqrt(g) times a Rician draw around the LOS steering vector,
/// with g the linear large-scale gain tx_gain + G(psi_mu) - FSPL(d_mu).
/// Fading streams are derived from (master_seed, slot, sat, fleet, lav), so
/// assembly is a pure function of its arguments.
StackedChannel assemble_channel(int fleet_index,
                                const std::vector<SatelliteState>& serving,
                                const std::vector<CartesianVec>& lav_positions,
                                const ArrayGeometry& array, const BeamPattern& pattern,
                                const LinkParams& link, std::uint64_t master_seed,
                                long slot);

/// Debug dump: one row per (slot, fleet, sat, lav, element) with re/im parts.
void dump_channel_csv(std::ostream& out, long slot, const StackedChannel& ch,
                      const ArrayGeometry& array, bool header);

}  // namespace laesim
