#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gsopt/astro/epoch.hpp"
#include "gsopt/astro/geodesy.hpp"

namespace gsopt::astro {

/// Mean orbital elements from one two-line element set.
struct TleRecord {
  int norad_id = 0;
  std::string name;
  EpochUtc epoch;
  double mean_motion_rev_per_day = 0.0;
  double eccentricity = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double arg_perigee_deg = 0.0;
  double mean_anomaly_deg = 0.0;
  double bstar = 0.0;  // 1/earth-radii
  double ndot = 0.0;   // rev/day^2 (first derivative / 2), informational
  double nddot = 0.0;  // rev/day^3 (second derivative / 6), informational
  std::string line1;
  std::string line2;

  /// Semi-major axis (m) from the Kozai mean motion under two-body dynamics (WGS72 mu).
  [[nodiscard]] double semi_major_axis_m() const noexcept {
    constexpr double mu = 398600.8e9;
    const double n = mean_motion_rev_per_day * kTwoPi / kSecondsPerDay;
    return std::cbrt(mu / (n * n));
  }
  [[nodiscard]] double mean_altitude_m() const noexcept {
    return semi_major_axis_m() - 6378135.0;
  }
};

struct TleDiagnostic {
  int line_number = 0;  // 1-based line of the offending record
  std::string message;
};

struct TleParseResult {
  std::vector<TleRecord> records;
  std::vector<TleDiagnostic> diagnostics;
};

/// Standard mod-10 TLE checksum over the first 68 columns ('-' counts as 1).
inline int tle_checksum(std::string_view line) noexcept {
  int sum = 0;
  for (std::size_t i = 0; i < line.size() && i < 68; ++i) {
    const char ch = line[i];
    if (ch >= '0' && ch <= '9') sum += ch - '0';
    else if (ch == '-') sum += 1;
  }
  return sum % 10;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string rtrim(std::string_view s) {
  std::size_t e = s.size();
  while (e > 0 && (s[e - 1] == ' ' || s[e - 1] == '\r' || s[e - 1] == '\n' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(0, e));
}

// 1-based inclusive column slice.
inline std::string columns(const std::string& line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

inline std::optional<double> parse_double(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

inline std::optional<int> parse_int(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return static_cast<int>(v);
}

// Implied-decimal exponent field such as " 13844-3" meaning 0.13844e-3.
inline std::optional<double> parse_implied_exponent(const std::string& field) {
  std::string t = trim(field);
  if (t.empty()) return 0.0;
  double sign = 1.0;
  if (t[0] == '-' || t[0] == '+') {
    if (t[0] == '-') sign = -1.0;
    t.erase(0, 1);
  }
  const auto exp_pos = t.find_last_of("+-");
  if (exp_pos == std::string::npos || exp_pos == 0) {
    const auto m = parse_double("0." + t);
    if (!m) return std::nullopt;
    return sign * *m;
  }
  const auto mant = parse_double("0." + t.substr(0, exp_pos));
  const auto ex = parse_int(t.substr(exp_pos));
  if (!mant || !ex) return std::nullopt;
  return sign * *mant * std::pow(10.0, *ex);
}

inline std::string format_implied_exponent(double v) {
  if (v == 0.0) return " 00000+0";
  const char sign = v < 0 ? '-' : ' ';
  const double a = std::abs(v);
  int e = static_cast<int>(std::floor(std::log10(a))) + 1;
  long m = std::lround(a / std::pow(10.0, e) * 1e5);
  if (m >= 100000) {
    m /= 10;
    ++e;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%c%05ld%c%d", sign, m, e < 0 ? '-' : '+', std::abs(e) % 10);
  return buf;
}

inline std::optional<std::string> decode_elements(const std::string& l1, const std::string& l2,
                                                  TleRecord& rec) {
  if (l1.size() < 69 || l2.size() < 69) return "line shorter than 69 columns";
  if (tle_checksum(l1) != l1[68] - '0') return "line 1 checksum mismatch";
  if (tle_checksum(l2) != l2[68] - '0') return "line 2 checksum mismatch";
  const auto id1 = parse_int(columns(l1, 3, 7));
  const auto id2 = parse_int(columns(l2, 3, 7));
  if (!id1 || !id2 || *id1 != *id2) return "catalog number missing or inconsistent";
  const auto yy = parse_int(columns(l1, 19, 20));
  const auto doy = parse_double(columns(l1, 21, 32));
  const auto ndot = parse_double(columns(l1, 34, 43));
  const auto nddot = parse_implied_exponent(columns(l1, 45, 52));
  const auto bstar = parse_implied_exponent(columns(l1, 54, 61));
  const auto incl = parse_double(columns(l2, 9, 16));
  const auto raan = parse_double(columns(l2, 18, 25));
  const auto ecc = parse_double("0." + trim(columns(l2, 27, 33)));
  const auto argp = parse_double(columns(l2, 35, 42));
  const auto ma = parse_double(columns(l2, 44, 51));
  const auto mm = parse_double(columns(l2, 53, 63));
  if (!yy || !doy || !ndot || !nddot || !bstar || !incl || !raan || !ecc || !argp || !ma || !mm) {
    return "unparseable numeric field";
  }
  if (*doy < 1.0 || *doy >= 367.0) return "epoch day-of-year out of range";
  if (*ecc < 0.0 || *ecc >= 1.0) return "eccentricity out of range";
  if (*incl < 0.0 || *incl > 180.0) return "inclination out of range";
  if (*raan < 0.0 || *raan >= 360.0) return "RAAN out of range";
  if (*argp < 0.0 || *argp >= 360.0) return "argument of perigee out of range";
  if (*ma < 0.0 || *ma >= 360.0) return "mean anomaly out of range";
  if (!(*mm > 0.0)) return "mean motion must be positive";
  const int year = *yy < 57 ? 2000 + *yy : 1900 + *yy;
  rec.norad_id = *id1;
  rec.epoch = EpochUtc::from_calendar(year, 1, 1) + (*doy - 1.0) * kSecondsPerDay;
  rec.ndot = *ndot;
  rec.nddot = *nddot;
  rec.bstar = *bstar;
  rec.inclination_deg = *incl;
  rec.raan_deg = *raan;
  rec.eccentricity = *ecc;
  rec.arg_perigee_deg = *argp;
  rec.mean_anomaly_deg = *ma;
  rec.mean_motion_rev_per_day = *mm;
  const double a = rec.semi_major_axis_m();
  if (!std::isfinite(a) || a <= 0.0) return "derived semi-major axis is not positive";
  rec.line1 = l1.substr(0, 69);
  rec.line2 = l2.substr(0, 69);
  return std::nullopt;
}

}  // namespace detail

/// Parses 2-line or 3-line (named) element sets. Invalid records are skipped and reported.
inline TleParseResult parse_tle_catalog(std::string_view text) {
  TleParseResult out;
  std::vector<std::string> lines;
  {
    std::string s(text);
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(detail::rtrim(line));
  }
  std::string pending_name;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (detail::trim(line).empty()) continue;
    const int line_no = static_cast<int>(i) + 1;
    if (line.rfind("1 ", 0) == 0) {
      if (i + 1 >= lines.size() || lines[i + 1].rfind("2 ", 0) != 0) {
        out.diagnostics.push_back({line_no, "line 1 not followed by line 2"});
        pending_name.clear();
        continue;
      }
      TleRecord rec;
      if (auto err = detail::decode_elements(line, lines[i + 1], rec)) {
        out.diagnostics.push_back({line_no, *err});
      } else {
        rec.name = pending_name.empty() ? std::to_string(rec.norad_id) : pending_name;
        out.records.push_back(std::move(rec));
      }
      pending_name.clear();
      ++i;
    } else if (line.rfind("2 ", 0) == 0) {
      out.diagnostics.push_back({line_no, "line 2 without preceding line 1"});
      pending_name.clear();
    } else {
      pending_name = detail::trim(line.rfind("0 ", 0) == 0 ? line.substr(2) : line);
    }
  }
  return out;
}

/// Renders a record back into two checksummed element lines.
inline std::pair<std::string, std::string> format_tle_lines(const TleRecord& r) {
  // Epoch as 2-digit year + fractional day-of-year.
  const std::string iso = r.epoch.to_iso8601();
  const int year = std::stoi(iso.substr(0, 4));
  const double doy = (r.epoch - EpochUtc::from_calendar(year, 1, 1)) / kSecondsPerDay + 1.0;
  char l1[128], l2[128];
  char ndot[48];
  std::snprintf(ndot, sizeof ndot, "%c.%08ld", r.ndot < 0 ? '-' : ' ',
                std::lround(std::abs(r.ndot) * 1e8));
  std::snprintf(l1, sizeof l1, "1 %05dU %-8s %02d%012.8f %s %s %s 0 %4d", r.norad_id, "24001A",
                year % 100, doy, ndot, detail::format_implied_exponent(r.nddot).c_str(),
                detail::format_implied_exponent(r.bstar).c_str(), 999);
  std::snprintf(l2, sizeof l2, "2 %05d %8.4f %8.4f %07ld %8.4f %8.4f %11.8f%5d", r.norad_id,
                r.inclination_deg, r.raan_deg, std::lround(r.eccentricity * 1e7),
                r.arg_perigee_deg, r.mean_anomaly_deg, r.mean_motion_rev_per_day, 1);
  std::string a(l1), b(l2);
  a.resize(68, ' ');
  b.resize(68, ' ');
  a.push_back(static_cast<char>('0' + tle_checksum(a)));
  b.push_back(static_cast<char>('0' + tle_checksum(b)));
  return {a, b};
}

}  // namespace gsopt::astro
