#pragma once

#include <Eigen/Core>

#include "laesim/geo.hpp"

namespace laesim {

/// Element radiation pattern: parabolic mainlobe with a hard sidelobe floor,
/// G(psi) = peak - min(3 (psi / hbw)^2, sll).
struct BeamPattern {
  double peak_gain_dbi = 37.5;
  double half_beamwidth_deg = 1.14;
  double sidelobe_suppression_db = 25.0;
};

/// Planar array, rows x cols elements, spacing in wavelengths.
struct ArrayGeometry {
  int rows = 4;
  int cols = 4;
  double element_spacing = 0.5;
  int count() const { return rows * cols; }
};

double element_gain_db(double psi_deg, const BeamPattern& pattern);

/// Angle between the boresight axis and the ray sat -> target, degrees [0, 180].
double off_boresight_deg(const CartesianVec& sat_pos, const CartesianVec& boresight,
                         const CartesianVec& target);

/// Satellite-local array frame: z along boresight, x the projection of the
/// velocity vector orthogonal to boresight, y completing the right-handed set.
struct LocalFrame {
  CartesianVec x, y, z;
  static LocalFrame from(const CartesianVec& boresight, const CartesianVec& velocity);
  /// World direction expressed in this frame (components along x, y, z).
  Eigen::Vector3d to_local(const CartesianVec& dir_world) const;
};

/// Array response for a unit direction in the local frame. Element (m, n)
/// carries phase 2 pi spacing (m u + n v), u and v the direction cosines
/// along the local x and y axes; entries row-major, entry (0,0) = 1.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom,
                                 const Eigen::Vector3d& dir_local);

}  // namespace laesim
