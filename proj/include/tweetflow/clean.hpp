#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tweetflow/layers.hpp"
#include "tweetflow/record.hpp"

namespace tweetflow {

struct CleaningConfig {
  std::optional<std::int64_t> study_start;  // inclusive, epoch UTC
  std::optional<std::int64_t> study_end;    // exclusive
  int utc_offset_minutes = -180;
  std::int64_t bot_threshold = 250;         // strictly-more-than
  std::set<std::string> bot_allow;          // auto-flagged users to keep
  std::set<std::string> bot_deny;           // users to remove regardless
};

// Stable sort by timestamp, preserving input order for equal instants.
void sort_by_timestamp(std::vector<TweetRecord>& records);

struct DedupResult {
  std::vector<TweetRecord> records;
  std::int64_t removed = 0;
};

// Removes repeats keyed by (exact text bytes, exact lon, exact lat); the
// earliest record of each class survives, relative order is preserved.
// Input must already be ordered by timestamp.
DedupResult dedup_repeated(std::vector<TweetRecord> records);

struct BotReport {
  std::map<std::string, std::int64_t> tweet_counts;  // all users
  std::set<std::string> auto_flagged;                // count > threshold
  std::set<std::string> removed;                     // after overrides
  std::vector<std::string> warnings;                 // unknown override users
};

// Flags accounts with strictly more tweets than the threshold, then applies
// the allow/deny overrides. Run after dedup.
BotReport flag_bots(const std::vector<TweetRecord>& records, const CleaningConfig& config);

std::vector<TweetRecord> remove_users(std::vector<TweetRecord> records,
                                      const std::set<std::string>& users);

std::string bots_csv(const BotReport& report);

// Percentage 100*num/den rounded half-up to 2 decimals, rendered "0.00" when
// den == 0. Pure integer arithmetic.
std::string percent_2dp(std::int64_t num, std::int64_t den);

struct SummaryRow {
  std::string zone_id;
  std::string name;
  std::int64_t total_tweets = 0;
  std::int64_t valid_tweets = 0;
  std::int64_t users = 0;
  std::int64_t users_moved = 0;

  std::string valid_pct() const { return percent_2dp(valid_tweets, total_tweets); }
  std::string moved_pct() const { return percent_2dp(users_moved, users); }
};

// One row per zone: raw tweets in zone, surviving tweets in zone, distinct
// users of the surviving tweets, and users that tweeted more than once from
// at least two distinct (lon,lat) pairs inside the zone.
std::vector<SummaryRow> summarize(const std::vector<TweetRecord>& records_raw,
                                  const std::vector<TweetRecord>& records_clean,
                                  const std::vector<Zone>& zones);

std::string summary_csv(const std::vector<SummaryRow>& rows);

struct CleanResult {
  std::vector<TweetRecord> records;
  std::int64_t parsed = 0;
  std::int64_t parse_failures = 0;
  std::int64_t outside_window = 0;
  std::int64_t duplicates_removed = 0;
  BotReport bots;
};

// Full cleaning pass over already-parsed records: window filter, timestamp
// sort, dedup, bot removal.
CleanResult clean_records(std::vector<TweetRecord> records, const CleaningConfig& config);

}  // namespace tweetflow
