#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gsopt/astro/epoch.hpp"
#include "gsopt/astro/geodesy.hpp"
#include "gsopt/astro/propagator.hpp"
#include "gsopt/astro/sgp4.hpp"
#include "gsopt/astro/tle.hpp"

using namespace gsopt::astro;

namespace {

const char* kTle88888 =
    "1 88888U          80275.98708465  .00073094  13844-3  66816-4 0    87\n"
    "2 88888  72.8435 115.9689 0086731  52.6988 110.5714 16.05824518  1058\n";

const char* kTle00005 =
    "1 00005U 58002B   00179.78495062  .00000023  00000-0  28098-4 0  4753\n"
    "2 00005  34.2682 348.7242 1859667 331.7664  19.3264 10.82419157413667\n";

TleRecord only_record(const char* text) {
  auto r = parse_tle_catalog(text);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_TRUE(r.diagnostics.empty());
  return r.records.at(0);
}

double dist_km(const Vec3& a_m, double x, double y, double z) {
  return (a_m * 1e-3 - Vec3{x, y, z}).norm();
}

}  // namespace

TEST(Epoch, Iso8601RoundTripToMillisecond) {
  const auto t = EpochUtc::parse_iso8601("2024-09-11T00:00:00Z");
  EXPECT_EQ(t.to_iso8601(), "2024-09-11T00:00:00.000Z");
  EXPECT_EQ(EpochUtc::parse_iso8601("2024-09-11 00:00:00 UTC"), t);
  EXPECT_EQ(EpochUtc::parse_iso8601("2000-01-01T12:00:00").seconds_since_j2000(), 0.0);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double s = std::uniform_real_distribution<double>(-3e9, 3e9)(rng);
    const EpochUtc e(std::round(s * 1000.0) / 1000.0);
    const auto back = EpochUtc::parse_iso8601(e.to_iso8601());
    EXPECT_NEAR(back - e, 0.0, 1e-3);
  }
}

TEST(Epoch, OrderingFollowsCalendar) {
  const auto a = EpochUtc::from_calendar(2024, 2, 28, 23, 59, 59.5);
  const auto b = EpochUtc::from_calendar(2024, 2, 29);
  const auto c = EpochUtc::from_calendar(2024, 3, 1);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_DOUBLE_EQ(c - b, 86400.0);
}

TEST(Epoch, RejectsGarbage) {
  EXPECT_THROW(EpochUtc::parse_iso8601("yesterday"), std::invalid_argument);
  EXPECT_THROW(EpochUtc::parse_iso8601("2024-13-01T00:00:00"), std::invalid_argument);
}

TEST(Tle, ParsesReferenceElementSet) {
  const auto rec = only_record(kTle88888);
  EXPECT_EQ(rec.norad_id, 88888);
  EXPECT_NEAR(rec.inclination_deg, 72.8435, 1e-12);
  EXPECT_NEAR(rec.raan_deg, 115.9689, 1e-12);
  EXPECT_NEAR(rec.eccentricity, 0.0086731, 1e-12);
  EXPECT_NEAR(rec.arg_perigee_deg, 52.6988, 1e-12);
  EXPECT_NEAR(rec.mean_anomaly_deg, 110.5714, 1e-12);
  EXPECT_NEAR(rec.mean_motion_rev_per_day, 16.05824518, 1e-12);
  EXPECT_NEAR(rec.bstar, 0.66816e-4, 1e-15);
  // 1980 day 275.98708465
  const auto expected = EpochUtc::from_calendar(1980, 1, 1) + 274.98708465 * 86400.0;
  EXPECT_NEAR(rec.epoch - expected, 0.0, 1e-4);
  EXPECT_GT(rec.semi_major_axis_m(), 0.0);
}

TEST(Tle, EmptyInputIsEmpty) {
  const auto r = parse_tle_catalog("");
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Tle, CorruptedChecksumIsSkipped) {
  std::string text = kTle88888;
  text[68] = '8';
  const auto r = parse_tle_catalog(text);
  EXPECT_TRUE(r.records.empty());
  ASSERT_EQ(r.diagnostics.size(), 1u);
}

TEST(Tle, ThreeLineAndShortLines) {
  const std::string text = std::string("ISS TEST\n") + kTle00005 + "1 12345U short\n2 12345 bad\n" +
                           kTle88888;
  const auto r = parse_tle_catalog(text);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].name, "ISS TEST");
  EXPECT_EQ(r.records[1].norad_id, 88888);
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(Tle, FormatRoundTrip) {
  const auto rec = only_record(kTle00005);
  const auto [l1, l2] = format_tle_lines(rec);
  const auto again = only_record((l1 + "\n" + l2 + "\n").c_str());
  EXPECT_EQ(again.norad_id, rec.norad_id);
  EXPECT_NEAR(again.epoch - rec.epoch, 0.0, 1e-3);
  EXPECT_NEAR(again.mean_motion_rev_per_day, rec.mean_motion_rev_per_day, 1e-8);
  EXPECT_NEAR(again.eccentricity, rec.eccentricity, 1e-7);
  EXPECT_NEAR(again.bstar, rec.bstar, 1e-9);
}

TEST(Sgp4, SpacetrackReport3Vectors) {
  const Sgp4 p(only_record(kTle88888));
  EXPECT_LT(dist_km(p.propagate_minutes(0.0, {}).position, 2328.97048951, -5995.22076416,
                    1719.97067261),
            1.0);
  EXPECT_LT(dist_km(p.propagate_minutes(360.0, {}).position, 2456.10705566, -6071.93853760,
                    1222.89727783),
            1.0);
}

TEST(Sgp4, VerificationRecord00005) {
  const Sgp4 p(only_record(kTle00005));
  const auto s0 = p.propagate_minutes(0.0, {});
  EXPECT_LT(dist_km(s0.position, 7022.46529266, -1400.08296755, 0.03995155), 1.0);
  EXPECT_LT((s0.velocity * 1e-3 - Vec3{1.893841015, 6.405893759, 4.534807250}).norm(), 1e-3);
  EXPECT_LT(dist_km(p.propagate_minutes(360.0, {}).position, -7154.03120202, -3783.17682504,
                    -3536.19412294),
            1.0);
  EXPECT_LT(dist_km(p.propagate_minutes(720.0, {}).position, -7134.59340119, 6531.68641334,
                    3260.27186483),
            1.0);
}

TEST(Sgp4, DeepSpaceRejected) {
  auto rec = only_record(kTle88888);
  rec.mean_motion_rev_per_day = 1.0027;
  EXPECT_THROW(Sgp4{rec}, PropagationError);
}

TEST(Sgp4, DecayCarriesEpoch) {
  auto rec = only_record(kTle88888);
  rec.bstar = 0.5;
  const Sgp4 p(rec);
  const auto at = rec.epoch + 40.0 * 86400.0;
  try {
    (void)p.propagate(at);
    FAIL() << "expected decay";
  } catch (const PropagationError& e) {
    EXPECT_EQ(e.epoch(), at);
  }
}

TEST(Propagator, DeterministicBitIdentical) {
  const auto rec = only_record(kTle00005);
  const auto t = rec.epoch + 1234.5;
  const auto a = propagate(rec, t);
  const auto b = propagate(rec, t);
  EXPECT_EQ(a.position, b.position);
  EXPECT_EQ(a.velocity, b.velocity);
}

TEST(Propagator, J2CircularEquatorialKeepsRadius) {
  TleRecord rec;
  rec.epoch = EpochUtc::from_calendar(2024, 9, 11);
  rec.mean_motion_rev_per_day = 15.0;
  const J2SecularPropagator p(rec);
  const double r0 = p.propagate(rec.epoch).position.norm();
  const double period = 86400.0 / 15.0;
  EXPECT_NEAR(p.propagate(rec.epoch + period).position.norm(), r0, 1.0);
  EXPECT_NEAR(p.propagate(rec.epoch + 17.3 * period).position.norm(), r0, 1.0);
}

TEST(Propagator, EcefMatchesRotatedTeme) {
  const auto rec = only_record(kTle00005);
  const Propagator p(rec);
  const auto t = rec.epoch + 600.0;
  const auto inertial = p.propagate_inertial(t);
  const auto fixed = p.propagate(t);
  EXPECT_NEAR(fixed.position.norm(), inertial.position.norm(), 1e-6);
  const auto back = rotate_fixed_to_inertial(fixed.position, gmst_iau82(t));
  EXPECT_LT((back - inertial.position).norm(), 1e-6);
  // Finite-difference Earth-fixed velocity; SGP4 velocity is not the exact position derivative.
  const auto ahead = p.propagate(t + 0.5).position;
  const auto behind = p.propagate(t - 0.5).position;
  EXPECT_LT(((ahead - behind) - fixed.velocity).norm(), 1.0);
  const Propagator j2(rec, PropagatorKind::J2Secular);
  const auto d = j2.propagate(t + 0.5).position - j2.propagate(t - 0.5).position;
  EXPECT_LT((d - j2.propagate(t).velocity).norm(), 0.05);
}

TEST(Geodesy, ReferencePoints) {
  const auto eq = geodetic_to_ecef({0, 0, 0});
  EXPECT_NEAR(eq.x, 6378137.0, 1e-9);
  EXPECT_NEAR(eq.y, 0.0, 1e-9);
  EXPECT_NEAR(eq.z, 0.0, 1e-9);
  const auto pole = geodetic_to_ecef({90, 33, 0});
  EXPECT_NEAR(pole.x, 0.0, 1e-3);
  EXPECT_NEAR(pole.y, 0.0, 1e-3);
  EXPECT_NEAR(pole.z, 6356752.3142, 1e-3);
  // Arbitrary-precision evaluation of the closed-form conversion (40 digits).
  const auto p = geodetic_to_ecef({45, 45, 1000});
  EXPECT_NEAR(p.x, 3194919.145060574, 1e-6);
  EXPECT_NEAR(p.y, 3194919.145060574, 1e-6);
  EXPECT_NEAR(p.z, 4488055.515647106, 1e-6);
}

TEST(Geodesy, RoundTripIdempotent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180), alt(-500, 2e6);
  for (int i = 0; i < 5000; ++i) {
    const GeodeticPoint g{lat(rng), lon(rng), alt(rng)};
    const auto back = ecef_to_geodetic(geodetic_to_ecef(g));
    EXPECT_NEAR(back.latitude_deg, g.latitude_deg, 1e-6);
    if (std::abs(g.latitude_deg) < 89.9999) {
      EXPECT_NEAR(back.longitude_deg, g.longitude_deg, 1e-6);
    }
    EXPECT_NEAR(back.altitude_m, g.altitude_m, 1e-3);
  }
}

TEST(Frames, StationFixedIsEpochIndependent) {
  const GeodeticPoint site{78.23, 15.41, 500.0};
  const auto r = geodetic_to_ecef(site);
  for (double dt : {0.0, 3600.0, 86400.0 * 3.7}) {
    const auto t = EpochUtc::from_calendar(2024, 9, 11) + dt;
    const auto inertial = rotate_fixed_to_inertial(r, gmst_iau82(t));
    const auto fixed = rotate_inertial_to_fixed(inertial, gmst_iau82(t));
    EXPECT_LT((fixed - r).norm(), 1e-6);
  }
}

TEST(Frames, SiderealDayRotation) {
  const double sidereal_day = kTwoPi / wgs84::kRotationRate;
  const Vec3 v{7.0e6, -1.2e6, 3.3e6};
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11, 5, 17, 3.0);
  const auto a = rotate_inertial_to_fixed(v, gmst_iau82(t0));
  const auto b = rotate_inertial_to_fixed(v, gmst_iau82(t0 + sidereal_day));
  EXPECT_LT((a - b).norm() / v.norm(), 1e-6);
}

TEST(Frames, GmstKnownValue) {
  // 1992-08-20 12:14 UT1: GMST = 152.578787886 deg.
  const auto t = EpochUtc::from_calendar(1992, 8, 20, 12, 14, 0.0);
  EXPECT_NEAR(gmst_iau82(t) * kRadToDeg, 152.578787886, 1e-6);
}
