#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gsopt/astro/epoch.hpp"
#include "gsopt/astro/geodesy.hpp"
#include "gsopt/astro/tle.hpp"

namespace gsopt::astro {

/// Raised when an orbit cannot be propagated to the requested epoch (decay, e >= 1, ...).
class PropagationError : public std::runtime_error {
 public:
  PropagationError(const std::string& what, EpochUtc epoch)
      : std::runtime_error(what + " at " + epoch.to_iso8601()), epoch_(epoch) {}
  [[nodiscard]] EpochUtc epoch() const noexcept { return epoch_; }

 private:
  EpochUtc epoch_;
};

/// Inertial (TEME) state in meters and m/s.
struct InertialState {
  Vec3 position;
  Vec3 velocity;
};

namespace wgs72 {
inline constexpr double kMu = 398600.8;            // km^3/s^2
inline constexpr double kRadius = 6378.135;        // km
inline constexpr double kJ2 = 0.001082616;
inline constexpr double kJ3 = -0.00000253881;
inline constexpr double kJ4 = -0.00000165597;
}  // namespace wgs72

/// Near-Earth SGP4 (periods below 225 minutes). Deep-space records are rejected at construction.
class Sgp4 {
 public:
  explicit Sgp4(const TleRecord& tle) : epoch_(tle.epoch) {
    using namespace wgs72;
    xke_ = 60.0 / std::sqrt(kRadius * kRadius * kRadius / kMu);
    const double j3oj2 = kJ3 / kJ2;
    constexpr double x2o3 = 2.0 / 3.0;
    constexpr double temp4 = 1.5e-12;

    bstar_ = tle.bstar;
    ecco_ = tle.eccentricity;
    inclo_ = tle.inclination_deg * kDegToRad;
    nodeo_ = tle.raan_deg * kDegToRad;
    argpo_ = tle.arg_perigee_deg * kDegToRad;
    mo_ = tle.mean_anomaly_deg * kDegToRad;
    const double no_kozai = tle.mean_motion_rev_per_day / (1440.0 / kTwoPi);

    const double ss = 78.0 / kRadius + 1.0;
    const double qzms2ttemp = (120.0 - 78.0) / kRadius;
    const double qzms2t = qzms2ttemp * qzms2ttemp * qzms2ttemp * qzms2ttemp;

    // Un-Kozai the mean motion.
    const double eccsq = ecco_ * ecco_;
    const double omeosq = 1.0 - eccsq;
    const double rteosq = std::sqrt(omeosq);
    const double cosio = std::cos(inclo_);
    const double cosio2 = cosio * cosio;
    const double ak = std::pow(xke_ / no_kozai, x2o3);
    const double d1 = 0.75 * kJ2 * (3.0 * cosio2 - 1.0) / (rteosq * omeosq);
    double del = d1 / (ak * ak);
    const double adel = ak * (1.0 - del * del - del * (1.0 / 3.0 + 134.0 * del * del / 81.0));
    del = d1 / (adel * adel);
    no_unkozai_ = no_kozai / (1.0 + del);
    const double ao = std::pow(xke_ / no_unkozai_, x2o3);
    const double sinio = std::sin(inclo_);
    const double po = ao * omeosq;
    const double con42 = 1.0 - 5.0 * cosio2;
    con41_ = -con42 - cosio2 - cosio2;
    const double posq = po * po;
    const double rp = ao * (1.0 - ecco_);

    if (kTwoPi / no_unkozai_ >= 225.0) {
      throw PropagationError("deep-space orbit (period >= 225 min) is not supported by SGP4 near-Earth",
                             epoch_);
    }
    if (omeosq <= 0.0 || no_unkozai_ <= 0.0) {
      throw PropagationError("invalid mean elements", epoch_);
    }
    if (rp < 1.0) {
      throw PropagationError("epoch elements are sub-orbital", epoch_);
    }

    isimp_ = rp < (220.0 / kRadius + 1.0);
    double sfour = ss;
    double qzms24 = qzms2t;
    const double perige = (rp - 1.0) * kRadius;
    if (perige < 156.0) {
      sfour = perige - 78.0;
      if (perige < 98.0) sfour = 20.0;
      const double qzms24temp = (120.0 - sfour) / kRadius;
      qzms24 = qzms24temp * qzms24temp * qzms24temp * qzms24temp;
      sfour = sfour / kRadius + 1.0;
    }
    const double pinvsq = 1.0 / posq;
    const double tsi = 1.0 / (ao - sfour);
    eta_ = ao * ecco_ * tsi;
    const double etasq = eta_ * eta_;
    const double eeta = ecco_ * eta_;
    const double psisq = std::abs(1.0 - etasq);
    const double coef = qzms24 * std::pow(tsi, 4.0);
    const double coef1 = coef / std::pow(psisq, 3.5);
    const double cc2 = coef1 * no_unkozai_ *
                       (ao * (1.0 + 1.5 * etasq + eeta * (4.0 + etasq)) +
                        0.375 * kJ2 * tsi / psisq * con41_ * (8.0 + 3.0 * etasq * (8.0 + etasq)));
    cc1_ = bstar_ * cc2;
    double cc3 = 0.0;
    if (ecco_ > 1.0e-4) cc3 = -2.0 * coef * tsi * j3oj2 * no_unkozai_ * sinio / ecco_;
    x1mth2_ = 1.0 - cosio2;
    cc4_ = 2.0 * no_unkozai_ * coef1 * ao * omeosq *
           (eta_ * (2.0 + 0.5 * etasq) + ecco_ * (0.5 + 2.0 * etasq) -
            kJ2 * tsi / (ao * psisq) *
                (-3.0 * con41_ * (1.0 - 2.0 * eeta + etasq * (1.5 - 0.5 * eeta)) +
                 0.75 * x1mth2_ * (2.0 * etasq - eeta * (1.0 + etasq)) * std::cos(2.0 * argpo_)));
    cc5_ = 2.0 * coef1 * ao * omeosq * (1.0 + 2.75 * (etasq + eeta) + eeta * etasq);
    const double cosio4 = cosio2 * cosio2;
    const double temp1 = 1.5 * kJ2 * pinvsq * no_unkozai_;
    const double temp2 = 0.5 * temp1 * kJ2 * pinvsq;
    const double temp3 = -0.46875 * kJ4 * pinvsq * pinvsq * no_unkozai_;
    mdot_ = no_unkozai_ + 0.5 * temp1 * rteosq * con41_ +
            0.0625 * temp2 * rteosq * (13.0 - 78.0 * cosio2 + 137.0 * cosio4);
    argpdot_ = -0.5 * temp1 * con42 + 0.0625 * temp2 * (7.0 - 114.0 * cosio2 + 395.0 * cosio4) +
               temp3 * (3.0 - 36.0 * cosio2 + 49.0 * cosio4);
    const double xhdot1 = -temp1 * cosio;
    nodedot_ = xhdot1 + (0.5 * temp2 * (4.0 - 19.0 * cosio2) + 2.0 * temp3 * (3.0 - 7.0 * cosio2)) * cosio;
    omgcof_ = bstar_ * cc3 * std::cos(argpo_);
    xmcof_ = 0.0;
    if (ecco_ > 1.0e-4) xmcof_ = -x2o3 * coef * bstar_ / eeta;
    nodecf_ = 3.5 * omeosq * xhdot1 * cc1_;
    t2cof_ = 1.5 * cc1_;
    if (std::abs(cosio + 1.0) > 1.5e-12)
      xlcof_ = -0.25 * j3oj2 * sinio * (3.0 + 5.0 * cosio) / (1.0 + cosio);
    else
      xlcof_ = -0.25 * j3oj2 * sinio * (3.0 + 5.0 * cosio) / temp4;
    aycof_ = -0.5 * j3oj2 * sinio;
    const double delmotemp = 1.0 + eta_ * std::cos(mo_);
    delmo_ = delmotemp * delmotemp * delmotemp;
    sinmao_ = std::sin(mo_);
    x7thm1_ = 7.0 * cosio2 - 1.0;

    if (!isimp_) {
      const double cc1sq = cc1_ * cc1_;
      d2_ = 4.0 * ao * tsi * cc1sq;
      const double temp = d2_ * tsi * cc1_ / 3.0;
      d3_ = (17.0 * ao + sfour) * temp;
      d4_ = 0.5 * temp * ao * tsi * (221.0 * ao + 31.0 * sfour) * cc1_;
      t3cof_ = d2_ + 2.0 * cc1sq;
      t4cof_ = 0.25 * (3.0 * d3_ + cc1_ * (12.0 * d2_ + 10.0 * cc1sq));
      t5cof_ = 0.2 * (3.0 * d4_ + 12.0 * cc1_ * d3_ + 6.0 * d2_ * d2_ + 15.0 * cc1sq * (2.0 * d2_ + cc1sq));
    }
  }

  [[nodiscard]] EpochUtc epoch() const noexcept { return epoch_; }

  /// TEME state at `t`. Throws PropagationError on decay or invalid perturbed elements.
  [[nodiscard]] InertialState propagate(EpochUtc t) const {
    return propagate_minutes((t - epoch_) / 60.0, t);
  }

  [[nodiscard]] InertialState propagate_minutes(double tsince, EpochUtc at) const {
    using namespace wgs72;
    const double vkmpersec = kRadius * xke_ / 60.0;

    const double xmdf = mo_ + mdot_ * tsince;
    const double argpdf = argpo_ + argpdot_ * tsince;
    const double nodedf = nodeo_ + nodedot_ * tsince;
    double argpm = argpdf;
    double mm = xmdf;
    const double t2 = tsince * tsince;
    double nodem = nodedf + nodecf_ * t2;
    double tempa = 1.0 - cc1_ * tsince;
    double tempe = bstar_ * cc4_ * tsince;
    double templ = t2cof_ * t2;

    if (!isimp_) {
      const double delomg = omgcof_ * tsince;
      const double delmtemp = 1.0 + eta_ * std::cos(xmdf);
      const double delm = xmcof_ * (delmtemp * delmtemp * delmtemp - delmo_);
      const double temp = delomg + delm;
      mm = xmdf + temp;
      argpm = argpdf - temp;
      const double t3 = t2 * tsince;
      const double t4 = t3 * tsince;
      tempa = tempa - d2_ * t2 - d3_ * t3 - d4_ * t4;
      tempe = tempe + bstar_ * cc5_ * (std::sin(mm) - sinmao_);
      templ = templ + t3cof_ * t3 + t4 * (t4cof_ + tsince * t5cof_);
    }

    double nm = no_unkozai_;
    double em = ecco_;
    const double inclm = inclo_;
    const double am = std::pow(xke_ / nm, 2.0 / 3.0) * tempa * tempa;
    nm = xke_ / std::pow(am, 1.5);
    em = em - tempe;
    if (em >= 1.0 || em < -0.001 || !(am > 0.0)) {
      throw PropagationError("perturbed eccentricity out of range", at);
    }
    if (em < 1.0e-6) em = 1.0e-6;
    mm = mm + no_unkozai_ * templ;
    double xlm = mm + argpm + nodem;

    nodem = std::fmod(nodem, kTwoPi);
    argpm = std::fmod(argpm, kTwoPi);
    xlm = std::fmod(xlm, kTwoPi);
    mm = std::fmod(xlm - argpm - nodem, kTwoPi);

    const double sinim = std::sin(inclm);
    const double cosim = std::cos(inclm);

    // Long-period periodics.
    const double ep = em;
    const double axnl = ep * std::cos(argpm);
    double temp = 1.0 / (am * (1.0 - ep * ep));
    const double aynl = ep * std::sin(argpm) + temp * aycof_;
    const double xl = mm + argpm + nodem + temp * xlcof_ * axnl;

    // Kepler's equation.
    const double u = std::fmod(xl - nodem, kTwoPi);
    double eo1 = u;
    double tem5 = 9999.9;
    double sineo1 = 0.0, coseo1 = 0.0;
    for (int ktr = 1; std::abs(tem5) >= 1.0e-12 && ktr <= 10; ++ktr) {
      sineo1 = std::sin(eo1);
      coseo1 = std::cos(eo1);
      tem5 = 1.0 - coseo1 * axnl - sineo1 * aynl;
      tem5 = (u - aynl * coseo1 + axnl * sineo1 - eo1) / tem5;
      if (std::abs(tem5) >= 0.95) tem5 = tem5 > 0.0 ? 0.95 : -0.95;
      eo1 += tem5;
    }

    // Short-period periodics.
    const double ecose = axnl * coseo1 + aynl * sineo1;
    const double esine = axnl * sineo1 - aynl * coseo1;
    const double el2 = axnl * axnl + aynl * aynl;
    const double pl = am * (1.0 - el2);
    if (pl < 0.0) throw PropagationError("semi-latus rectum negative", at);
    const double rl = am * (1.0 - ecose);
    const double rdotl = std::sqrt(am) * esine / rl;
    const double rvdotl = std::sqrt(pl) / rl;
    const double betal = std::sqrt(1.0 - el2);
    temp = esine / (1.0 + betal);
    const double sinu = am / rl * (sineo1 - aynl - axnl * temp);
    const double cosu = am / rl * (coseo1 - axnl + aynl * temp);
    double su = std::atan2(sinu, cosu);
    const double sin2u = (cosu + cosu) * sinu;
    const double cos2u = 1.0 - 2.0 * sinu * sinu;
    temp = 1.0 / pl;
    const double temp1 = 0.5 * kJ2 * temp;
    const double temp2 = temp1 * temp;

    const double mrt = rl * (1.0 - 1.5 * temp2 * betal * con41_) + 0.5 * temp1 * x1mth2_ * cos2u;
    su = su - 0.25 * temp2 * x7thm1_ * sin2u;
    const double xnode = nodem + 1.5 * temp2 * cosim * sin2u;
    const double xinc = inclm + 1.5 * temp2 * cosim * sinim * cos2u;
    const double mvt = rdotl - nm * temp1 * x1mth2_ * sin2u / xke_;
    const double rvdot = rvdotl + nm * temp1 * (x1mth2_ * cos2u + 1.5 * con41_) / xke_;

    const double sinsu = std::sin(su), cossu = std::cos(su);
    const double snod = std::sin(xnode), cnod = std::cos(xnode);
    const double sini = std::sin(xinc), cosi = std::cos(xinc);
    const double xmx = -snod * cosi;
    const double xmy = cnod * cosi;
    const Vec3 uvec{xmx * sinsu + cnod * cossu, xmy * sinsu + snod * cossu, sini * sinsu};
    const Vec3 vvec{xmx * cossu - cnod * sinsu, xmy * cossu - snod * sinsu, sini * cossu};

    if (mrt < 1.0) throw PropagationError("satellite has decayed", at);

    const double rscale = mrt * kRadius * 1000.0;
    InertialState s;
    s.position = uvec * rscale;
    s.velocity = (uvec * mvt + vvec * rvdot) * (vkmpersec * 1000.0);
    return s;
  }

 private:
  EpochUtc epoch_;
  double xke_ = 0.0;
  double bstar_ = 0.0, ecco_ = 0.0, inclo_ = 0.0, nodeo_ = 0.0, argpo_ = 0.0, mo_ = 0.0;
  double no_unkozai_ = 0.0;
  bool isimp_ = false;
  double con41_ = 0.0, cc1_ = 0.0, cc4_ = 0.0, cc5_ = 0.0, d2_ = 0.0, d3_ = 0.0, d4_ = 0.0;
  double delmo_ = 0.0, eta_ = 0.0, argpdot_ = 0.0, omgcof_ = 0.0, sinmao_ = 0.0;
  double t2cof_ = 0.0, t3cof_ = 0.0, t4cof_ = 0.0, t5cof_ = 0.0;
  double x1mth2_ = 0.0, x7thm1_ = 0.0, mdot_ = 0.0, nodedot_ = 0.0, xlcof_ = 0.0, xmcof_ = 0.0;
  double nodecf_ = 0.0, aycof_ = 0.0;
};

}  // namespace gsopt::astro
