#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "gsopt/astro/epoch.hpp"
#include "gsopt/astro/geodesy.hpp"
#include "gsopt/astro/sgp4.hpp"
#include "gsopt/astro/tle.hpp"

namespace gsopt::astro {

struct EcefState {
  EpochUtc epoch;
  Vec3 position;  // m, Earth-fixed
  Vec3 velocity;  // m/s, Earth-fixed (includes the frame rotation term)
};

/// Two-body Kepler motion with J2 secular drift of node, perigee and mean anomaly.
/// Initialized from TLE mean elements; no drag, no periodic terms.
class J2SecularPropagator {
 public:
  static constexpr double kMu = 398600.8e9;  // m^3/s^2, WGS72 to match TLE conventions
  static constexpr double kRadius = 6378135.0;
  static constexpr double kJ2 = 0.001082616;

  explicit J2SecularPropagator(const TleRecord& tle)
      : epoch_(tle.epoch),
        e_(tle.eccentricity),
        i_(tle.inclination_deg * kDegToRad),
        raan0_(tle.raan_deg * kDegToRad),
        argp0_(tle.arg_perigee_deg * kDegToRad),
        m0_(tle.mean_anomaly_deg * kDegToRad) {
    n_ = tle.mean_motion_rev_per_day * kTwoPi / kSecondsPerDay;
    a_ = std::cbrt(kMu / (n_ * n_));
    if (e_ < 0.0 || e_ >= 1.0 || !(a_ > 0.0)) {
      throw PropagationError("invalid mean elements for J2 propagation", epoch_);
    }
    const double p = a_ * (1.0 - e_ * e_);
    const double k = kJ2 * (kRadius / p) * (kRadius / p);
    const double ci = std::cos(i_);
    raan_rate_ = -1.5 * n_ * k * ci;
    argp_rate_ = 0.75 * n_ * k * (5.0 * ci * ci - 1.0);
    m_rate_ = n_ + 0.75 * n_ * k * std::sqrt(1.0 - e_ * e_) * (3.0 * ci * ci - 1.0);
    if (a_ * (1.0 - e_) < kRadius) {
      throw PropagationError("perigee below Earth surface", epoch_);
    }
  }

  [[nodiscard]] InertialState propagate(EpochUtc t) const {
    const double dt = t - epoch_;
    const double raan = raan0_ + raan_rate_ * dt;
    const double argp = argp0_ + argp_rate_ * dt;
    const double m = std::fmod(m0_ + m_rate_ * dt, kTwoPi);
    double ea = e_ < 0.8 ? m : std::numbers::pi;
    for (int it = 0; it < 50; ++it) {
      const double f = ea - e_ * std::sin(ea) - m;
      const double step = f / (1.0 - e_ * std::cos(ea));
      ea -= step;
      if (std::abs(step) < 1e-14) break;
    }
    const double cos_e = std::cos(ea), sin_e = std::sin(ea);
    const double root = std::sqrt(1.0 - e_ * e_);
    // Perifocal position and velocity.
    const double xp = a_ * (cos_e - e_);
    const double yp = a_ * root * sin_e;
    const double r = a_ * (1.0 - e_ * cos_e);
    const double edot = m_rate_ / (1.0 - e_ * cos_e);
    const double vxp = -a_ * sin_e * edot;
    const double vyp = a_ * root * cos_e * edot;

    const double co = std::cos(raan), so = std::sin(raan);
    const double cw = std::cos(argp), sw = std::sin(argp);
    const double ci = std::cos(i_), si = std::sin(i_);
    const Vec3 p{co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si};
    const Vec3 q{-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si};
    InertialState s;
    s.position = p * xp + q * yp;
    s.velocity = p * vxp + q * vyp;
    // Secular rotation of the node (about z) and of perigee (about the orbit normal).
    const Vec3 w = p.cross(q);
    s.velocity = s.velocity + Vec3{0.0, 0.0, raan_rate_}.cross(s.position) +
                 (w * argp_rate_).cross(s.position);
    if (r < kRadius) throw PropagationError("radius below Earth surface", t);
    return s;
  }

 private:
  EpochUtc epoch_;
  double e_, i_, raan0_, argp0_, m0_;
  double n_ = 0.0, a_ = 0.0;
  double raan_rate_ = 0.0, argp_rate_ = 0.0, m_rate_ = 0.0;
};

enum class PropagatorKind { Sgp4, J2Secular };

inline PropagatorKind parse_propagator_kind(std::string_view s) {
  if (s == "sgp4") return PropagatorKind::Sgp4;
  if (s == "j2" || s == "j2_secular") return PropagatorKind::J2Secular;
  throw std::invalid_argument("unknown propagator '" + std::string(s) + "' (expected sgp4 or j2)");
}

inline std::string_view to_string(PropagatorKind k) {
  return k == PropagatorKind::Sgp4 ? "sgp4" : "j2";
}

/// Mean-element propagator producing Earth-fixed states (GMST rotation only).
/// Accuracy is specified within 30 days of the element epoch; later epochs still propagate.
class Propagator {
 public:
  explicit Propagator(const TleRecord& tle, PropagatorKind kind = PropagatorKind::Sgp4)
      : impl_(make(tle, kind)) {}

  [[nodiscard]] InertialState propagate_inertial(EpochUtc t) const {
    return std::visit([&](const auto& p) { return p.propagate(t); }, impl_);
  }

  [[nodiscard]] Vec3 position_ecef(EpochUtc t) const {
    return rotate_inertial_to_fixed(propagate_inertial(t).position, gmst_iau82(t));
  }

  [[nodiscard]] EcefState propagate(EpochUtc t) const {
    const InertialState s = propagate_inertial(t);
    const double g = gmst_iau82(t);
    const Vec3 r = rotate_inertial_to_fixed(s.position, g);
    const Vec3 omega{0.0, 0.0, wgs84::kRotationRate};
    const Vec3 v = rotate_inertial_to_fixed(s.velocity, g) - omega.cross(r);
    return {t, r, v};
  }

 private:
  using Impl = std::variant<Sgp4, J2SecularPropagator>;
  static Impl make(const TleRecord& tle, PropagatorKind kind) {
    if (kind == PropagatorKind::Sgp4) return Impl(std::in_place_type<Sgp4>, tle);
    return Impl(std::in_place_type<J2SecularPropagator>, tle);
  }
  Impl impl_;
};

/// One-shot convenience wrapper.
inline EcefState propagate(const TleRecord& record, EpochUtc epoch,
                           PropagatorKind kind = PropagatorKind::Sgp4) {
  return Propagator(record, kind).propagate(epoch);
}

}  // namespace gsopt::astro
