#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gsopt/model/types.hpp"

namespace gsopt::model {

/// Portable seeded stream. The standard distributions are implementation-defined, so values are
/// derived from raw mt19937_64 output directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool coin() { return (engine_() >> 63) != 0; }
  /// Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do v = engine_();
    while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

/// Sampling ranges for randomized trials.
struct RandomRanges {
  double integ_lo = 50000, integ_hi = 200000;
  double setup_lo = 10000, setup_hi = 100000;
  double monthly_lo = 200, monthly_hi = 5000;
  double license_lo = 1000, license_hi = 5000;
  double pass_lo = 25, pass_hi = 175;
  double minute_lo = 5, minute_hi = 35;
  double sat_rate_lo = 9e8, sat_rate_hi = 1.8e9;
  double station_rate_lo = 1.2e9, station_rate_hi = 1.8e9;
};

/// Resamples every cost and data-rate constant. Each station flips a fair coin between
/// per-pass and per-minute pricing; the other price is zeroed.
inline Scenario randomize_scenario(const Scenario& base, std::uint64_t seed,
                                   const RandomRanges& r = {}) {
  Scenario s = base;
  s.rng_seed = seed;
  Rng rng(seed);
  for (auto& p : s.providers) p.integration_cost = rng.uniform(r.integ_lo, r.integ_hi);
  for (auto& st : s.stations) {
    st.setup_cost = rng.uniform(r.setup_lo, r.setup_hi);
    st.monthly_cost = rng.uniform(r.monthly_lo, r.monthly_hi);
    st.license_cost = rng.uniform(r.license_lo, r.license_hi);
    const double pass = rng.uniform(r.pass_lo, r.pass_hi);
    const double minute = rng.uniform(r.minute_lo, r.minute_hi);
    st.data_rate = rng.uniform(r.station_rate_lo, r.station_rate_hi);
    if (rng.coin()) {
      st.per_pass_cost = pass;
      st.per_minute_cost = 0.0;
    } else {
      st.per_pass_cost = 0.0;
      st.per_minute_cost = minute;
    }
  }
  for (auto& sat : s.satellites) sat.data_rate = rng.uniform(r.sat_rate_lo, r.sat_rate_hi);
  return s;
}

inline bool in_altitude_band(const astro::TleRecord& r, double lo_m = 300e3, double hi_m = 1000e3) {
  const double h = r.mean_altitude_m();
  return h >= lo_m && h <= hi_m;
}

/// Uniform sample without replacement among records whose mean altitude lies in [300, 1000] km.
/// Returns indices into `records`, in sampling order.
inline std::vector<std::size_t> sample_catalog(const std::vector<astro::TleRecord>& records,
                                               std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (in_altitude_band(records[i])) pool.push_back(i);
  if (count > pool.size())
    throw ConfigError("requested " + std::to_string(count) + " satellites but only " +
                      std::to_string(pool.size()) + " catalog objects lie in 300-1000 km");
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace gsopt::model
