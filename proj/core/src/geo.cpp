#include "laesim/geo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace laesim {

namespace {

void require_same_frame(const CartesianVec& a, const CartesianVec& b) {
  if (a.frame != b.frame) {
    throw std::invalid_argument("frame tag mismatch in vector arithmetic");
  }
}

}  // namespace

CartesianVec operator+(const CartesianVec& a, const CartesianVec& b) {
  require_same_frame(a, b);
  return {a.x + b.x, a.y + b.y, a.z + b.z, a.frame};
}

CartesianVec operator-(const CartesianVec& a, const CartesianVec& b) {
  require_same_frame(a, b);
  return {a.x - b.x, a.y - b.y, a.z - b.z, a.frame};
}

CartesianVec operator*(double s, const CartesianVec& v) {
  return {s * v.x, s * v.y, s * v.z, v.frame};
}

double dot(const CartesianVec& a, const CartesianVec& b) {
  require_same_frame(a, b);
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

CartesianVec cross(const CartesianVec& a, const CartesianVec& b) {
  require_same_frame(a, b);
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x,
          a.frame};
}

double norm(const CartesianVec& v) {
  return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

CartesianVec normalized(const CartesianVec& v) {
  const double n = norm(v);
  if (n == 0.0) {
    throw std::invalid_argument("cannot normalize zero vector");
  }
  return (1.0 / n) * v;
}

CartesianVec geodetic_to_cartesian(const GeodeticPos& p) {
  const double r = kEarthRadiusKm + p.alt_km;
  const double lat = deg2rad(p.lat_deg);
  const double lon = deg2rad(p.lon_deg);
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
          r * std::sin(lat), Frame::EarthFixed};
}

GeodeticPos cartesian_to_geodetic(const CartesianVec& v) {
  const double r = norm(v);
  if (r == 0.0) {
    throw std::invalid_argument("cannot convert zero vector to geodetic");
  }
  GeodeticPos p;
  p.lat_deg = rad2deg(std::asin(v.z / r));
  p.lon_deg = rad2deg(std::atan2(v.y, v.x));
  if (p.lon_deg <= -180.0) p.lon_deg = 180.0;  // lon in (-180, 180]
  p.alt_km = r - kEarthRadiusKm;
  return p;
}

CartesianVec inertial_to_earth_fixed(const CartesianVec& v, Instant t) {
  if (v.frame != Frame::Inertial) {
    throw std::invalid_argument("inertial_to_earth_fixed: vector not Inertial");
  }
  const double a = -kEarthRotationRadS * t.seconds;
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z, Frame::EarthFixed};
}

double elevation_deg(const CartesianVec& ground, const CartesianVec& sat) {
  if (ground.frame != Frame::EarthFixed || sat.frame != Frame::EarthFixed) {
    throw std::invalid_argument("elevation_deg expects EarthFixed vectors");
  }
  if (norm(ground) == 0.0) {
    throw std::invalid_argument("elevation_deg: ground at Earth center");
  }
  const CartesianVec d = sat - ground;
  const double dn = norm(d);
  if (dn == 0.0) {
    throw std::invalid_argument("elevation_deg: satellite coincides with ground");
  }
  const double s = dot(normalized(ground), d) / dn;
  return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

double slant_range_km(const CartesianVec& a, const CartesianVec& b) {
  return norm(a - b);
}

double great_circle_km(const GeodeticPos& a, const GeodeticPos& b) {
  const double r = kEarthRadiusKm + a.alt_km;
  const double p1 = deg2rad(a.lat_deg), p2 = deg2rad(b.lat_deg);
  const double dp = p2 - p1;
  const double dl = deg2rad(b.lon_deg - a.lon_deg);
  const double h = std::sin(dp / 2) * std::sin(dp / 2) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * r * std::asin(std::min(1.0, std::sqrt(h)));
}

namespace {

// Metric speed |dp/df| along the lat/lon-linear segment at parameter f,
// km per unit of f.
double path_metric(const FleetTrack& t, double f) {
  const double r = kEarthRadiusKm + t.start.alt_km;
  const double dphi = deg2rad(t.end.lat_deg - t.start.lat_deg);
  const double dlam = deg2rad(t.end.lon_deg - t.start.lon_deg);
  const double phi = deg2rad(t.start.lat_deg) + f * dphi;
  const double c = std::cos(phi);
  return r * std::sqrt(dphi * dphi + c * c * dlam * dlam);
}

// Arc length from f=0 to f, composite Simpson.
double path_arclen(const FleetTrack& t, double f) {
  constexpr int kIntervals = 128;  // even
  const double h = f / kIntervals;
  if (h == 0.0) return 0.0;
  double sum = path_metric(t, 0.0) + path_metric(t, f);
  for (int i = 1; i < kIntervals; ++i) {
    sum += path_metric(t, i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Invert arc length: smallest f with arclen(f) = s, s <= total length.
double path_param_at(const FleetTrack& t, double s, double total) {
  if (total <= 0.0 || s <= 0.0) return 0.0;
  if (s >= total) return 1.0;
  double f = s / total;
  for (int it = 0; it < 8; ++it) {
    const double g = path_arclen(t, f) - s;
    const double m = path_metric(t, f);
    if (m <= 0.0) break;
    const double step = g / m;
    f = std::clamp(f - step, 0.0, 1.0);
    if (std::abs(step) < 1e-14) break;
  }
  return f;
}

}  // namespace

double track_path_length_km(const FleetTrack& track) {
  return path_arclen(track, 1.0);
}

GeodeticPos track_centroid(const FleetTrack& track, Instant t) {
  const double total = track_path_length_km(track);
  const double f = path_param_at(track, track.speed_kms * t.seconds, total);
  GeodeticPos p;
  p.lat_deg = track.start.lat_deg + f * (track.end.lat_deg - track.start.lat_deg);
  p.lon_deg = track.start.lon_deg + f * (track.end.lon_deg - track.start.lon_deg);
  p.alt_km = track.start.alt_km;
  return p;
}

std::vector<GeodeticPos> lav_positions(const FleetTrack& track, Instant t) {
  const GeodeticPos c = track_centroid(track, t);
  std::vector<GeodeticPos> out;
  out.reserve(track.lav_count);
  out.push_back(c);  // leader
  const int followers = track.lav_count - 1;
  const double r = kEarthRadiusKm + c.alt_km;
  const double coslat = std::cos(deg2rad(c.lat_deg));
  for (int i = 0; i < followers; ++i) {
    const double ang = 2.0 * kPi * i / followers;
    const double north_km = track.formation_radius_km * std::cos(ang);
    const double east_km = track.formation_radius_km * std::sin(ang);
    GeodeticPos p = c;
    p.lat_deg += rad2deg(north_km / r);
    p.lon_deg += rad2deg(east_km / (r * coslat));
    out.push_back(p);
  }
  return out;
}

}  // namespace laesim
