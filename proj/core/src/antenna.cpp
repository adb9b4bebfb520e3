#include "laesim/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace laesim {

double element_gain_db(double psi_deg, const BeamPattern& pattern) {
  const double ratio = psi_deg / pattern.half_beamwidth_deg;
  return pattern.peak_gain_dbi -
         std::min(3.0 * ratio * ratio, pattern.sidelobe_suppression_db);
}

double off_boresight_deg(const CartesianVec& sat_pos, const CartesianVec& boresight,
                         const CartesianVec& target) {
  const CartesianVec d = target - sat_pos;
  if (norm(d) == 0.0) {
    throw std::invalid_argument("off_boresight_deg: target coincides with satellite");
  }
  const double c = dot(normalized(boresight), normalized(d));
  return rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

LocalFrame LocalFrame::from(const CartesianVec& boresight, const CartesianVec& velocity) {
  LocalFrame f;
  f.z = normalized(boresight);
  CartesianVec vproj = velocity - dot(velocity, f.z) * f.z;
  if (norm(vproj) < 1e-12) {
    // velocity (near) parallel to boresight: fall back to the world axis
    // least aligned with it
    CartesianVec axis{1, 0, 0, boresight.frame};
    const double ax = std::abs(f.z.x), ay = std::abs(f.z.y), az = std::abs(f.z.z);
    if (ay <= ax && ay <= az) axis = {0, 1, 0, boresight.frame};
    if (az <= ax && az <= ay) axis = {0, 0, 1, boresight.frame};
    vproj = axis - dot(axis, f.z) * f.z;
  }
  f.x = normalized(vproj);
  f.y = cross(f.z, f.x);
  return f;
}

Eigen::Vector3d LocalFrame::to_local(const CartesianVec& dir_world) const {
  return {dot(dir_world, x), dot(dir_world, y), dot(dir_world, z)};
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom,
                                 const Eigen::Vector3d& dir_local) {
  const double u = dir_local.x();
  const double v = dir_local.y();
  Eigen::VectorXcd a(geom.count());
  const double k = 2.0 * kPi * geom.element_spacing;
  for (int m = 0; m < geom.rows; ++m) {
    for (int n = 0; n < geom.cols; ++n) {
      const double phase = k * (m * u + n * v);
      a(m * geom.cols + n) = std::polar(1.0, phase);
    }
  }
  return a;
}

}  // namespace laesim
