#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tweetflow {

// Weekday index: 0 = Monday ... 6 = Sunday.
enum : int { kMonday = 0, kTuesday, kWednesday, kThursday, kFriday, kSaturday, kSunday };

std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);
int weekday_from_days(std::int64_t days);

// ISO-8601 instant: YYYY-MM-DDTHH:MM:SS with optional fractional seconds
// (truncated) and optional zone (Z, +HH:MM, -HHMM; absent means UTC).
// Returns epoch seconds UTC, or nullopt with `err` set.
std::optional<std::int64_t> parse_iso8601(std::string_view text, std::string* err = nullptr);

std::string format_iso8601_utc(std::int64_t epoch_sec);

struct LocalTime {
  int hour = 0;
  int minute = 0;
  int second = 0;
  int weekday = 0;           // 0 = Monday
  std::int64_t day = 0;      // local days since epoch
};

LocalTime to_local(std::int64_t epoch_utc, int utc_offset_minutes);

// Night interval for home inference: starts at start_hour on a night that
// begins on one of the anchor weekdays and runs until end_hour_exclusive the
// next morning. Post-midnight hours belong to the night that started the
// evening before.
struct NightWindow {
  int start_hour = 22;
  int end_hour_exclusive = 8;
  // Anchor weekdays as a bitmask over weekday indices; default Mon-Thu.
  unsigned anchor_mask = (1u << kMonday) | (1u << kTuesday) |
                         (1u << kWednesday) | (1u << kThursday);

  bool anchored(int weekday) const { return (anchor_mask >> weekday) & 1u; }
};

bool is_night_local(const LocalTime& lt, const NightWindow& w);
bool is_night_tweet(std::int64_t epoch_utc, int utc_offset_minutes,
                    const NightWindow& w = NightWindow{});

// The visit window is the exact complement of the night window.
inline bool is_visit_time(std::int64_t epoch_utc, int utc_offset_minutes,
                          const NightWindow& w = NightWindow{}) {
  return !is_night_tweet(epoch_utc, utc_offset_minutes, w);
}

}  // namespace tweetflow
