#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsopt/astro/geodesy.hpp"

namespace gsopt::contacts {

using astro::GeodeticPoint;
using astro::Vec3;

/// Precomputed station frame for repeated elevation queries.
struct StationFrame {
  Vec3 position;  // ECEF, m
  astro::EnuBasis enu;

  explicit StationFrame(const GeodeticPoint& p)
      : position(astro::geodetic_to_ecef(p)), enu(astro::enu_basis(p)) {}

  /// Elevation (degrees) of an Earth-fixed point above the local geodetic horizon.
  [[nodiscard]] double elevation_deg(const Vec3& sat_ecef) const {
    const Vec3 d = sat_ecef - position;
    const double e = d.dot(enu.east);
    const double n = d.dot(enu.north);
    const double u = d.dot(enu.up);
    if (std::abs(e) + std::abs(n) + std::abs(u) < 1e-6)
      throw std::domain_error("satellite coincides with station: elevation undefined");
    return std::atan2(u, std::hypot(e, n)) * astro::kRadToDeg;
  }

  /// Sine of the elevation; monotone in elevation and cheaper for threshold tests.
  [[nodiscard]] double sin_elevation(const Vec3& sat_ecef) const {
    const Vec3 d = sat_ecef - position;
    const double r = d.norm();
    if (r < 1e-6) throw std::domain_error("satellite coincides with station: elevation undefined");
    return d.dot(enu.up) / r;
  }
};

inline double elevation(const Vec3& sat_ecef, const GeodeticPoint& station) {
  return StationFrame(station).elevation_deg(sat_ecef);
}

/// Earth-central half-angle (radians) of the ground region seeing a satellite at `altitude_m`
/// above the elevation mask, on a sphere of mean Earth radius.
inline double coverage_cone_radius(double altitude_m, double min_elevation_deg) {
  const double eps = min_elevation_deg * astro::kDegToRad;
  const double r = astro::kMeanEarthRadius;
  const double ratio = r / (r + altitude_m) * std::cos(eps);
  return std::max(0.0, std::acos(std::min(1.0, ratio)) - eps);
}

/// Closed small circle of `segments` vertices (first vertex repeated) around a site,
/// as (longitude, latitude) degree pairs.
inline std::vector<std::pair<double, double>> small_circle(double lat_deg, double lon_deg,
                                                           double radius_rad, int segments = 64) {
  std::vector<std::pair<double, double>> ring;
  const double lat = lat_deg * astro::kDegToRad;
  const double lon = lon_deg * astro::kDegToRad;
  for (int k = 0; k <= segments; ++k) {
    const double az = astro::kTwoPi * (k % segments) / segments;
    const double plat = std::asin(std::sin(lat) * std::cos(radius_rad) +
                                  std::cos(lat) * std::sin(radius_rad) * std::cos(az));
    double plon = lon + std::atan2(std::sin(az) * std::sin(radius_rad) * std::cos(lat),
                                   std::cos(radius_rad) - std::sin(lat) * std::sin(plat));
    plon = std::remainder(plon, astro::kTwoPi);
    ring.emplace_back(plon * astro::kRadToDeg, plat * astro::kRadToDeg);
  }
  return ring;
}

}  // namespace gsopt::contacts
