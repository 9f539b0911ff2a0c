#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gsopt::astro {

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kJulianDateJ2000 = 2451545.0;

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant's algorithm).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

// 2000-01-01T12:00:00 expressed as seconds since the Unix epoch.
inline constexpr double kJ2000UnixSeconds = 946728000.0;

}  // namespace detail

/// A UTC instant stored as seconds relative to J2000.0 (2000-01-01T12:00:00).
/// Leap seconds are ignored; every day is 86400 s long.
class EpochUtc {
 public:
  constexpr EpochUtc() = default;
  constexpr explicit EpochUtc(double seconds_since_j2000) : seconds_(seconds_since_j2000) {}

  static EpochUtc from_calendar(int year, unsigned month, unsigned day, int hour = 0,
                                int minute = 0, double second = 0.0) {
    const auto days = detail::days_from_civil(year, month, day);
    const double unix_s = static_cast<double>(days) * kSecondsPerDay + hour * 3600.0 +
                          minute * 60.0 + second;
    return EpochUtc(unix_s - detail::kJ2000UnixSeconds);
  }

  /// Accepts "YYYY-MM-DDTHH:MM:SS[.fff][Z]", a space instead of 'T', and an optional " UTC" suffix.
  static EpochUtc parse_iso8601(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\n' || s.back() == '\r')) s.pop_back();
    if (s.size() >= 4 && s.compare(s.size() - 4, 4, " UTC") == 0) s.resize(s.size() - 4);
    if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.pop_back();
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    double sec = 0.0;
    char sep = 0;
    int consumed = 0;
    const int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%lf%n", &y, &mo, &d, &sep, &h, &mi,
                              &sec, &consumed);
    if (n == 3 && s.size() == 10) {
      return from_calendar(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    }
    if (n < 7 || (sep != 'T' && sep != 't' && sep != ' ') ||
        static_cast<std::size_t>(consumed) != s.size()) {
      throw std::invalid_argument("invalid ISO-8601 timestamp: '" + std::string(text) + "'");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
        sec < 0.0 || sec >= 61.0) {
      throw std::invalid_argument("timestamp field out of range: '" + std::string(text) + "'");
    }
    return from_calendar(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), h, mi, sec);
  }

  /// Formats as "YYYY-MM-DDTHH:MM:SS.sssZ" (rounded to the millisecond).
  [[nodiscard]] std::string to_iso8601() const {
    const double unix_s = seconds_ + detail::kJ2000UnixSeconds;
    const auto total_ms = static_cast<std::int64_t>(std::llround(unix_s * 1000.0));
    std::int64_t days = total_ms / 86'400'000;
    std::int64_t ms_of_day = total_ms % 86'400'000;
    if (ms_of_day < 0) {
      ms_of_day += 86'400'000;
      --days;
    }
    const auto date = detail::civil_from_days(days);
    const auto h = ms_of_day / 3'600'000;
    const auto mi = (ms_of_day / 60'000) % 60;
    const auto sec = (ms_of_day / 1000) % 60;
    const auto ms = ms_of_day % 1000;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<long long>(date.year), date.month, date.day,
                  static_cast<long long>(h), static_cast<long long>(mi),
                  static_cast<long long>(sec), static_cast<long long>(ms));
    return buf;
  }

  [[nodiscard]] constexpr double seconds_since_j2000() const noexcept { return seconds_; }
  [[nodiscard]] constexpr double julian_date() const noexcept {
    return kJulianDateJ2000 + seconds_ / kSecondsPerDay;
  }

  [[nodiscard]] constexpr EpochUtc operator+(double seconds) const noexcept {
    return EpochUtc(seconds_ + seconds);
  }
  [[nodiscard]] constexpr EpochUtc operator-(double seconds) const noexcept {
    return EpochUtc(seconds_ - seconds);
  }
  [[nodiscard]] constexpr double operator-(EpochUtc other) const noexcept {
    return seconds_ - other.seconds_;
  }

  constexpr auto operator<=>(const EpochUtc&) const = default;

 private:
  double seconds_ = 0.0;
};

}  // namespace gsopt::astro
