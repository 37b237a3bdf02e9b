#include "tweetflow/timewin.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace tweetflow {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

}  // namespace

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = floor_div(y, 400);
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
  z += 719468;
  const std::int64_t era = floor_div(z, 146097);
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  year = static_cast<int>(y + (month <= 2));
}

int weekday_from_days(std::int64_t days) {
  // 1970-01-01 (day 0) was a Thursday; Monday = 0.
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

namespace {

bool read_digits(std::string_view s, std::size_t& pos, int count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (int i = 0; i < count; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += count;
  out = v;
  return true;
}

}  // namespace

std::optional<std::int64_t> parse_iso8601(std::string_view s, std::string* err) {
  auto fail = [&](const char* msg) -> std::optional<std::int64_t> {
    if (err) *err = msg;
    return std::nullopt;
  };

  std::size_t pos = 0;
  int year, month, day, hour, minute, second;
  if (!read_digits(s, pos, 4, year)) return fail("bad year");
  if (pos >= s.size() || s[pos] != '-') return fail("expected '-' after year");
  ++pos;
  if (!read_digits(s, pos, 2, month)) return fail("bad month");
  if (pos >= s.size() || s[pos] != '-') return fail("expected '-' after month");
  ++pos;
  if (!read_digits(s, pos, 2, day)) return fail("bad day");
  if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' '))
    return fail("expected 'T' date-time separator");
  ++pos;
  if (!read_digits(s, pos, 2, hour)) return fail("bad hour");
  if (pos >= s.size() || s[pos] != ':') return fail("expected ':' after hour");
  ++pos;
  if (!read_digits(s, pos, 2, minute)) return fail("bad minute");
  if (pos >= s.size() || s[pos] != ':') return fail("expected ':' after minute");
  ++pos;
  if (!read_digits(s, pos, 2, second)) return fail("bad second");

  if (month < 1 || month > 12) return fail("month out of range");
  if (day < 1 || day > days_in_month(year, month)) return fail("day out of range");
  if (hour > 23) return fail("hour out of range");
  if (minute > 59) return fail("minute out of range");
  if (second > 59) return fail("second out of range");

  // Fractional seconds: parsed and truncated.
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      ++pos;
      ++digits;
    }
    if (digits == 0) return fail("empty fractional seconds");
  }

  int offset_min = 0;
  if (pos < s.size()) {
    const char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh, om = 0;
      if (!read_digits(s, pos, 2, oh)) return fail("bad zone hours");
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        if (!read_digits(s, pos, 2, om)) return fail("bad zone minutes");
      }
      if (oh > 18 || om > 59) return fail("zone offset out of range");
      offset_min = oh * 60 + om;
      if (c == '-') offset_min = -offset_min;
    } else {
      return fail("unexpected trailing characters");
    }
  }
  if (pos != s.size()) return fail("unexpected trailing characters");

  const std::int64_t days = days_from_civil(year, month, day);
  const std::int64_t local = days * 86400 + hour * 3600 + minute * 60 + second;
  return local - static_cast<std::int64_t>(offset_min) * 60;
}

std::string format_iso8601_utc(std::int64_t epoch_sec) {
  const std::int64_t days = floor_div(epoch_sec, 86400);
  const int sod = static_cast<int>(epoch_sec - days * 86400);
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                sod / 3600, (sod / 60) % 60, sod % 60);
  return buf;
}

LocalTime to_local(std::int64_t epoch_utc, int utc_offset_minutes) {
  const std::int64_t local = epoch_utc + static_cast<std::int64_t>(utc_offset_minutes) * 60;
  const std::int64_t days = floor_div(local, 86400);
  const int sod = static_cast<int>(local - days * 86400);
  LocalTime lt;
  lt.hour = sod / 3600;
  lt.minute = (sod / 60) % 60;
  lt.second = sod % 60;
  lt.day = days;
  lt.weekday = weekday_from_days(days);
  return lt;
}

bool is_night_local(const LocalTime& lt, const NightWindow& w) {
  if (lt.hour >= w.start_hour) return w.anchored(lt.weekday);
  if (lt.hour < w.end_hour_exclusive) {
    const int prev = (lt.weekday + 6) % 7;
    return w.anchored(prev);
  }
  return false;
}

bool is_night_tweet(std::int64_t epoch_utc, int utc_offset_minutes,
                    const NightWindow& w) {
  return is_night_local(to_local(epoch_utc, utc_offset_minutes), w);
}

}  // namespace tweetflow
