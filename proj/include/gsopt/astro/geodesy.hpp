#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "gsopt/astro/epoch.hpp"

namespace gsopt::astro {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
  [[nodiscard]] constexpr double dot(const Vec3& o) const noexcept {
    return x * o.x + y * o.y + z * o.z;
  }
  [[nodiscard]] constexpr Vec3 cross(const Vec3& o) const noexcept {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  [[nodiscard]] double norm() const noexcept { return std::sqrt(dot(*this)); }
  constexpr bool operator==(const Vec3&) const = default;
};

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace wgs84 {
inline constexpr double kSemiMajorAxis = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kSemiMinorAxis = kSemiMajorAxis * (1.0 - kFlattening);
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
inline constexpr double kRotationRate = 7.292115146706979e-5;  // rad/s
}  // namespace wgs84

/// IUGG mean Earth radius, used only for spherical sanity checks and coverage cones.
inline constexpr double kMeanEarthRadius = 6371008.8;

struct GeodeticPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
};

inline Vec3 geodetic_to_ecef(const GeodeticPoint& p) noexcept {
  const double lat = p.latitude_deg * kDegToRad;
  const double lon = p.longitude_deg * kDegToRad;
  const double sin_lat = std::sin(lat);
  const double cos_lat = std::cos(lat);
  const double n = wgs84::kSemiMajorAxis / std::sqrt(1.0 - wgs84::kEccentricitySq * sin_lat * sin_lat);
  return {(n + p.altitude_m) * cos_lat * std::cos(lon), (n + p.altitude_m) * cos_lat * std::sin(lon),
          (n * (1.0 - wgs84::kEccentricitySq) + p.altitude_m) * sin_lat};
}

inline GeodeticPoint ecef_to_geodetic(const Vec3& r) noexcept {
  const double a = wgs84::kSemiMajorAxis;
  const double e2 = wgs84::kEccentricitySq;
  const double rho = std::hypot(r.x, r.y);
  const double lon = std::atan2(r.y, r.x);
  if (rho < 1e-9) {
    const double lat = r.z >= 0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
    return {lat * kRadToDeg, 0.0, std::abs(r.z) - wgs84::kSemiMinorAxis};
  }
  double lat = std::atan2(r.z, rho * (1.0 - e2));
  double h = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double s = std::sin(lat);
    const double n = a / std::sqrt(1.0 - e2 * s * s);
    h = rho / std::cos(lat) - n;
    const double next = std::atan2(r.z, rho * (1.0 - e2 * n / (n + h)));
    const bool done = std::abs(next - lat) < 1e-14;
    lat = next;
    if (done) break;
  }
  // Altitude from the final latitude, stable near the poles.
  const double s = std::sin(lat);
  const double c = std::cos(lat);
  const double n = a / std::sqrt(1.0 - e2 * s * s);
  h = rho * c + r.z * s - a * a / n;
  return {lat * kRadToDeg, lon * kRadToDeg, h};
}

/// Greenwich mean sidereal time (IAU 1982 polynomial), radians in [0, 2pi). UT1 is taken as UTC.
inline double gmst_iau82(EpochUtc t) noexcept {
  const double tut1 = (t.julian_date() - kJulianDateJ2000) / 36525.0;
  double seconds = -6.2e-6 * tut1 * tut1 * tut1 + 0.093104 * tut1 * tut1 +
                   (876600.0 * 3600.0 + 8640184.812866) * tut1 + 67310.54841;
  double g = std::fmod(seconds * kDegToRad / 240.0, kTwoPi);
  if (g < 0.0) g += kTwoPi;
  return g;
}

/// Rotates an inertial (TEME) vector into the Earth-fixed frame about z by GMST.
inline Vec3 rotate_inertial_to_fixed(const Vec3& r, double gmst) noexcept {
  const double c = std::cos(gmst);
  const double s = std::sin(gmst);
  return {c * r.x + s * r.y, -s * r.x + c * r.y, r.z};
}

inline Vec3 rotate_fixed_to_inertial(const Vec3& r, double gmst) noexcept {
  const double c = std::cos(gmst);
  const double s = std::sin(gmst);
  return {c * r.x - s * r.y, s * r.x + c * r.y, r.z};
}

/// Local east-north-up unit vectors at a geodetic point.
struct EnuBasis {
  Vec3 east;
  Vec3 north;
  Vec3 up;
};

inline EnuBasis enu_basis(const GeodeticPoint& p) noexcept {
  const double lat = p.latitude_deg * kDegToRad;
  const double lon = p.longitude_deg * kDegToRad;
  const double sl = std::sin(lat), cl = std::cos(lat), so = std::sin(lon), co = std::cos(lon);
  return {{-so, co, 0.0}, {-sl * co, -sl * so, cl}, {cl * co, cl * so, sl}};
}

}  // namespace gsopt::astro
