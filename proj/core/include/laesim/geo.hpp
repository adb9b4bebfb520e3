#pragma once

#include <vector>

namespace laesim {

inline constexpr double kEarthRadiusKm = 6371.0;          // spherical model
inline constexpr double kEarthRotationRadS = 7.2921159e-5;
inline constexpr double kMuEarthKm3S2 = 398600.4418;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

/// A point on the scenario clock, seconds since the (opaque) epoch.
struct Instant {
  double seconds = 0.0;
  static Instant of_slot(long slot, double slot_duration_s) {
    return Instant{static_cast<double>(slot) * slot_duration_s};
  }
};

enum class Frame { EarthFixed, Inertial };

/// 3-vector in km, tagged with its reference frame. Arithmetic across
/// mismatched frames throws.
struct CartesianVec {
  double x = 0.0, y = 0.0, z = 0.0;
  Frame frame = Frame::EarthFixed;
};

CartesianVec operator+(const CartesianVec& a, const CartesianVec& b);
CartesianVec operator-(const CartesianVec& a, const CartesianVec& b);
CartesianVec operator*(double s, const CartesianVec& v);
double dot(const CartesianVec& a, const CartesianVec& b);
CartesianVec cross(const CartesianVec& a, const CartesianVec& b);
double norm(const CartesianVec& v);
CartesianVec normalized(const CartesianVec& v);

struct GeodeticPos {
  double lat_deg = 0.0;   // [-90, 90]
  double lon_deg = 0.0;   // (-180, 180]
  double alt_km = 0.0;    // above spherical Earth
};

/// One LAV fleet: leader at the track centroid, followers on a ring of
/// formation_radius_km around it, all moving together along start->end.
struct FleetTrack {
  GeodeticPos start;
  GeodeticPos end;
  double speed_kms = 0.0;
  int lav_count = 1;
  double formation_radius_km = 0.0;
};

CartesianVec geodetic_to_cartesian(const GeodeticPos& p);
GeodeticPos cartesian_to_geodetic(const CartesianVec& v);

/// Axis conversion between the inertial frame and the rotating Earth-fixed
/// frame at time t (rotation about z by -omega_e * t; norm preserved).
CartesianVec inertial_to_earth_fixed(const CartesianVec& v, Instant t);

/// Elevation of `sat` above the local horizontal plane at `ground`, degrees
/// in [-90, 90]. Both vectors must be EarthFixed.
double elevation_deg(const CartesianVec& ground, const CartesianVec& sat);

double slant_range_km(const CartesianVec& a, const CartesianVec& b);

/// Great-circle distance at the altitude of `a` (sphere radius R + a.alt).
double great_circle_km(const GeodeticPos& a, const GeodeticPos& b);

/// Length of the lat/lon-linear path of a track, km.
double track_path_length_km(const FleetTrack& track);

/// Fleet centroid at time t: moves along the lat/lon-linear path at constant
/// ground speed; holds at the endpoint once reached.
GeodeticPos track_centroid(const FleetTrack& track, Instant t);

/// Positions of the K LAVs at time t: leader at the centroid, K-1 followers
/// equally spaced on the formation ring.
std::vector<GeodeticPos> lav_positions(const FleetTrack& track, Instant t);

}  // namespace laesim
