#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "gsopt/contacts/finder.hpp"
#include "gsopt/contacts/geometry.hpp"
#include "gsopt/model/dataset.hpp"
#include "gsopt/model/random.hpp"
#include "support/contact_oracle.hpp"

using namespace gsopt;
using astro::EpochUtc;

namespace {

model::StationLocation make_station(int id, double lat, double lon, double rate = 1.5e9) {
  model::StationLocation s;
  s.id = id;
  s.provider_id = 0;
  s.name = "st" + std::to_string(id);
  s.geodetic = {lat, lon, 0.0};
  s.data_rate = rate;
  return s;
}

model::Satellite circular_sat(int id, double alt_km, double incl_deg, EpochUtc epoch,
                              double rate = 1.0e9) {
  model::Satellite s;
  s.id = id;
  s.name = "sat" + std::to_string(id);
  const double a = 6378135.0 + alt_km * 1e3;
  s.tle.epoch = epoch;
  s.tle.inclination_deg = incl_deg;
  s.tle.mean_motion_rev_per_day =
      std::sqrt(398600.8e9 / (a * a * a)) * 86400.0 / astro::kTwoPi;
  s.data_rate = rate;
  return s;
}

std::vector<astro::TleRecord> sample_catalog_records() {
  return astro::parse_tle_catalog(model::read_text_file(model::bundled_data_path("sample_catalog.tle")))
      .records;
}

}  // namespace

TEST(Elevation, ZenithHorizonNadir) {
  const astro::GeodeticPoint site{0, 0, 0};
  EXPECT_NEAR(contacts::elevation({6378137.0 + 500000.0, 0, 0}, site), 90.0, 1e-12);
  EXPECT_NEAR(contacts::elevation({6378137.0, 1e6, 0}, site), 0.0, 1e-9);
  EXPECT_NEAR(contacts::elevation({-(6378137.0 + 500000.0), 0, 0}, site), -90.0, 1e-12);
  EXPECT_THROW(contacts::elevation(astro::geodetic_to_ecef(site), site), std::domain_error);
}

TEST(Elevation, HorizonPlaneAtArbitrarySite) {
  const astro::GeodeticPoint site{37.5, -122.1, 30.0};
  const auto basis = astro::enu_basis(site);
  const auto p = astro::geodetic_to_ecef(site) + basis.east * 3e5 + basis.north * -1e5;
  EXPECT_NEAR(contacts::elevation(p, site), 0.0, 1e-9);
}

TEST(Coverage, ConeRadius) {
  EXPECT_NEAR(contacts::coverage_cone_radius(525e3, 90.0), 0.0, 1e-12);
  EXPECT_NEAR(contacts::coverage_cone_radius(1e-9, 10.0), 0.0, 1e-6);
  EXPECT_NEAR(contacts::coverage_cone_radius(1e-9, 0.0), 0.0, 1e-6);
  // Root-find the central angle at which a satellite at 525 km sits exactly at 10 deg elevation.
  const double r = astro::kMeanEarthRadius, h = 525e3, eps = 10.0 * astro::kDegToRad;
  auto elev_at = [&](double lambda) {
    return std::atan2(std::cos(lambda) - r / (r + h), std::sin(lambda));
  };
  double lo = 1e-9, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (elev_at(mid) > eps ? lo : hi) = mid;
  }
  EXPECT_NEAR(contacts::coverage_cone_radius(h, 10.0), 0.5 * (lo + hi), 1e-12);
}

TEST(Coverage, SmallCircleIsClosed) {
  const auto ring = contacts::small_circle(78.23, 15.41, 0.15, 64);
  ASSERT_EQ(ring.size(), 65u);
  EXPECT_DOUBLE_EQ(ring.front().first, ring.back().first);
  EXPECT_DOUBLE_EQ(ring.front().second, ring.back().second);
}

TEST(FindContacts, GeostationaryAlwaysVisibleIsClipped) {
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11);
  auto sat = circular_sat(0, 35786.0, 0.0, t0);
  sat.tle.mean_motion_rev_per_day = 1.00273791;
  const astro::Propagator p(sat.tle, astro::PropagatorKind::J2Secular);
  const auto sub = astro::ecef_to_geodetic(p.position_ecef(t0));
  const auto st = make_station(0, 0.0, sub.longitude_deg);
  contacts::ContactOptions opt;
  opt.propagator = astro::PropagatorKind::J2Secular;
  const auto res = contacts::find_contacts({sat}, {st}, t0, t0 + 86400.0, opt);
  ASSERT_EQ(res.contacts.size(), 1u);
  EXPECT_EQ(res.contacts[0].start, t0);
  EXPECT_EQ(res.contacts[0].end, t0 + 86400.0);
  EXPECT_DOUBLE_EQ(res.contacts[0].duration, 86400.0);
}

TEST(FindContacts, PolarStationNeverSeesEquatorialOrbit) {
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11);
  const auto sat = circular_sat(0, 500.0, 0.0, t0);
  contacts::ContactOptions opt;
  opt.propagator = astro::PropagatorKind::J2Secular;
  const auto res = contacts::find_contacts({sat}, {make_station(0, 80.0, 10.0)}, t0,
                                           t0 + 86400.0, opt);
  EXPECT_TRUE(res.contacts.empty());
  EXPECT_TRUE(res.diagnostics.empty());
}

TEST(FindContacts, FailedSatelliteExcludedWithDiagnostic) {
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11);
  auto bad = circular_sat(1, 500.0, 51.6, t0);
  bad.tle.mean_motion_rev_per_day = 1.0;  // deep space under SGP4
  const auto recs = sample_catalog_records();
  model::Satellite good;
  good.id = 0;
  good.tle = recs.at(0);
  good.data_rate = 1e9;
  const auto res = contacts::find_contacts({good, bad}, {make_station(0, 60.0, 10.0)}, t0,
                                           t0 + 86400.0);
  ASSERT_EQ(res.diagnostics.size(), 1u);
  EXPECT_EQ(res.diagnostics[0].satellite_id, 1);
  for (const auto& c : res.contacts) EXPECT_EQ(c.satellite_id, 0);
  EXPECT_FALSE(res.contacts.empty());
}

TEST(FindContacts, MatchesDenseOracleAndInvariants) {
  const auto recs = sample_catalog_records();
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11);
  const auto t1 = t0 + 86400.0;
  const auto picks = model::sample_catalog(recs, 5, 99);
  std::vector<model::Satellite> sats;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    model::Satellite s;
    s.id = static_cast<int>(i);
    s.tle = recs[picks[i]];
    s.data_rate = 1.1e9 + 1e8 * static_cast<double>(i);
    sats.push_back(s);
  }
  const std::vector<model::StationLocation> stations{
      make_station(0, 78.23, 15.41, 1.3e9), make_station(1, -46.52, 168.38, 1.2e9),
      make_station(2, 35.05, -118.15, 1.7e9)};
  const auto res = contacts::find_contacts(sats, stations, t0, t1);
  ASSERT_TRUE(res.diagnostics.empty());
  ASSERT_FALSE(res.contacts.empty());

  // Ids are consecutive and ordered by (satellite, start, station).
  for (std::size_t i = 0; i < res.contacts.size(); ++i) {
    const auto& c = res.contacts[i];
    EXPECT_EQ(c.id, static_cast<int>(i));
    EXPECT_GT(c.end, c.start);
    EXPECT_EQ(c.duration, c.end - c.start);
    EXPECT_GE(c.start, t0);
    EXPECT_LE(c.end, t1);
    EXPECT_EQ(c.data_rate, std::min(stations[c.station_id].data_rate, sats[c.satellite_id].data_rate));
    if (i > 0) {
      const auto& p = res.contacts[i - 1];
      EXPECT_TRUE(std::tie(p.satellite_id, p.start, p.station_id) <
                  std::tie(c.satellite_id, c.start, c.station_id));
    }
  }

  for (const auto& sat : sats) {
    const astro::Propagator prop(sat.tle);
    for (const auto& st : stations) {
      const auto truth = oracle::dense_windows(prop, st.geodetic.latitude_deg,
                                               st.geodetic.longitude_deg,
                                               t0.seconds_since_j2000(), t1.seconds_since_j2000(),
                                               10.0);
      std::vector<contacts::ContactWindow> mine;
      for (const auto& c : res.contacts)
        if (c.satellite_id == sat.id && c.station_id == st.id) mine.push_back(c);
      for (std::size_t k = 1; k < mine.size(); ++k) EXPECT_LT(mine[k - 1].end, mine[k].start);
      for (const auto& w : truth) {
        const bool long_pass = w.end - w.start > 10.0;
        const auto it = std::find_if(mine.begin(), mine.end(), [&](const auto& c) {
          return std::abs(c.start.seconds_since_j2000() - w.start) <= 1.0 &&
                 std::abs(c.end.seconds_since_j2000() - w.end) <= 1.0;
        });
        if (long_pass) {
          EXPECT_NE(it, mine.end()) << "missed oracle window of " << w.end - w.start;
        }
      }
      for (const auto& c : mine) {
        const bool matched = std::any_of(truth.begin(), truth.end(), [&](const auto& w) {
          return std::abs(c.start.seconds_since_j2000() - w.start) <= 1.0 &&
                 std::abs(c.end.seconds_since_j2000() - w.end) <= 1.0;
        });
        EXPECT_TRUE(matched);
        EXPECT_GE(c.max_elevation, 10.0 - 1e-6);
        EXPECT_LE(c.max_elevation, 90.0);
      }
    }
  }
}

TEST(FindContacts, HigherMaskNestsInsideLowerMask) {
  const auto recs = sample_catalog_records();
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11);
  std::vector<model::Satellite> sats;
  for (int i = 0; i < 3; ++i) {
    model::Satellite s;
    s.id = i;
    s.tle = recs[static_cast<std::size_t>(i)];
    s.data_rate = 1e9;
    sats.push_back(s);
  }
  const std::vector<model::StationLocation> stations{make_station(0, 64.8, -147.7),
                                                     make_station(1, -33.9, 18.4)};
  contacts::ContactOptions lo, hi;
  lo.min_elevation_deg = 5.0;
  hi.min_elevation_deg = 25.0;
  const auto a = contacts::find_contacts(sats, stations, t0, t0 + 86400.0, lo);
  const auto b = contacts::find_contacts(sats, stations, t0, t0 + 86400.0, hi);
  EXPECT_LT(b.contacts.size(), a.contacts.size());
  for (const auto& c : b.contacts) {
    const bool inside = std::any_of(a.contacts.begin(), a.contacts.end(), [&](const auto& w) {
      return w.satellite_id == c.satellite_id && w.station_id == c.station_id &&
             w.start <= c.start && c.end <= w.end;
    });
    EXPECT_TRUE(inside);
  }
}

TEST(FindContacts, ClipRenumbers) {
  const auto t0 = EpochUtc::from_calendar(2024, 9, 11);
  std::vector<contacts::ContactWindow> cs(3);
  cs[0] = {0, 0, 1, 0, t0, t0 + 100.0, 100.0, 1.0, 40.0};
  cs[1] = {1, 0, 0, 0, t0 + 50.0, t0 + 400.0, 350.0, 1.0, 40.0};
  cs[2] = {2, 1, 0, 0, t0 + 500.0, t0 + 900.0, 400.0, 1.0, 40.0};
  const auto out = contacts::clip_contacts(cs, t0 + 60.0, t0 + 600.0);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].station_id, 0);
  EXPECT_EQ(out[0].start, t0 + 60.0);
  EXPECT_EQ(out[1].station_id, 1);
  EXPECT_EQ(out[2].end, t0 + 600.0);
  EXPECT_DOUBLE_EQ(out[2].duration, 100.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out[i].id, i);
}
