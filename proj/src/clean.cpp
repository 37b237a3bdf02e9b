#include "tweetflow/clean.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tweetflow/csv.hpp"

namespace tweetflow {

void sort_by_timestamp(std::vector<TweetRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const TweetRecord& a, const TweetRecord& b) {
                     return a.timestamp_utc < b.timestamp_utc;
                   });
}

namespace {

struct DupKey {
  std::string_view text;
  double lon;
  double lat;
  bool operator==(const DupKey&) const = default;
};

struct DupKeyHash {
  std::size_t operator()(const DupKey& k) const {
    std::size_t h = std::hash<std::string_view>{}(k.text);
    h ^= std::hash<double>{}(k.lon) + 0x9E3779B9u + (h << 6) + (h >> 2);
    h ^= std::hash<double>{}(k.lat) + 0x9E3779B9u + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

DedupResult dedup_repeated(std::vector<TweetRecord> records) {
  DedupResult result;
  std::unordered_set<DupKey, DupKeyHash> seen;
  seen.reserve(records.size());
  // Reserved up front: the stored records never move, so the string_view
  // keys into them stay valid.
  result.records.reserve(records.size());
  for (TweetRecord& rec : records) {
    if (seen.contains({rec.text, rec.lon, rec.lat})) {
      ++result.removed;
      continue;
    }
    result.records.push_back(std::move(rec));
    const TweetRecord& stored = result.records.back();
    seen.insert({stored.text, stored.lon, stored.lat});
  }
  return result;
}

BotReport flag_bots(const std::vector<TweetRecord>& records, const CleaningConfig& config) {
  BotReport report;
  for (const TweetRecord& rec : records) ++report.tweet_counts[rec.user_id];

  for (const auto& [user, count] : report.tweet_counts)
    if (count > config.bot_threshold) report.auto_flagged.insert(user);

  for (const std::string& user : config.bot_allow)
    if (!report.auto_flagged.contains(user))
      report.warnings.push_back("allow-list user not auto-flagged: " + user);
  for (const std::string& user : config.bot_deny)
    if (!report.tweet_counts.contains(user))
      report.warnings.push_back("deny-list user not present: " + user);

  for (const std::string& user : report.auto_flagged)
    if (!config.bot_allow.contains(user)) report.removed.insert(user);
  for (const std::string& user : config.bot_deny)
    if (report.tweet_counts.contains(user)) report.removed.insert(user);
  return report;
}

std::vector<TweetRecord> remove_users(std::vector<TweetRecord> records,
                                      const std::set<std::string>& users) {
  if (users.empty()) return records;
  std::vector<TweetRecord> out;
  out.reserve(records.size());
  for (TweetRecord& rec : records)
    if (!users.contains(rec.user_id)) out.push_back(std::move(rec));
  return out;
}

std::string bots_csv(const BotReport& report) {
  // Rows sorted by tweet count descending, then id, so the top accounts read
  // first.
  std::vector<std::pair<std::string, std::int64_t>> rows(report.tweet_counts.begin(),
                                                         report.tweet_counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::ostringstream out;
  out << "user_id,tweet_count,auto_flagged,removed\n";
  for (const auto& [user, count] : rows) {
    out << csv_escape(user) << ',' << count << ','
        << (report.auto_flagged.contains(user) ? 1 : 0) << ','
        << (report.removed.contains(user) ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string percent_2dp(std::int64_t num, std::int64_t den) {
  if (den <= 0) return "0.00";
  // half-up rounding of 10000*num/den, all in integers
  const std::int64_t scaled = (20000 * num + den) / (2 * den);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld",
                static_cast<long long>(scaled / 100),
                static_cast<long long>(scaled % 100));
  return buf;
}

namespace {

struct CoordPair {
  double lon;
  double lat;
  bool operator<(const CoordPair& o) const {
    if (lon != o.lon) return lon < o.lon;
    return lat < o.lat;
  }
};

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TweetRecord>& records_raw,
                                  const std::vector<TweetRecord>& records_clean,
                                  const std::vector<Zone>& zones) {
  std::vector<SummaryRow> rows;
  rows.reserve(zones.size());
  for (const Zone& zone : zones) {
    SummaryRow row;
    row.zone_id = zone.zone_id;
    row.name = zone.name;
    for (const TweetRecord& rec : records_raw) {
      const Point p{rec.lon, rec.lat};
      if (zone.bounds.contains(p) && point_in_polygon(p, zone.polygon))
        ++row.total_tweets;
    }
    std::unordered_map<std::string, std::pair<std::int64_t, std::set<CoordPair>>> per_user;
    for (const TweetRecord& rec : records_clean) {
      const Point p{rec.lon, rec.lat};
      if (!zone.bounds.contains(p) || !point_in_polygon(p, zone.polygon)) continue;
      ++row.valid_tweets;
      auto& entry = per_user[rec.user_id];
      ++entry.first;
      entry.second.insert({rec.lon, rec.lat});
    }
    row.users = static_cast<std::int64_t>(per_user.size());
    for (const auto& [user, entry] : per_user)
      if (entry.first > 1 && entry.second.size() >= 2) ++row.users_moved;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "zone_id,name,total_tweets,valid_tweets,valid_pct,users,users_moved,moved_pct\n";
  for (const SummaryRow& r : rows) {
    out << csv_escape(r.zone_id) << ',' << csv_escape(r.name) << ','
        << r.total_tweets << ',' << r.valid_tweets << ',' << r.valid_pct() << ','
        << r.users << ',' << r.users_moved << ',' << r.moved_pct() << '\n';
  }
  return out.str();
}

CleanResult clean_records(std::vector<TweetRecord> records, const CleaningConfig& config) {
  CleanResult result;
  result.parsed = static_cast<std::int64_t>(records.size());

  if (config.study_start || config.study_end) {
    std::vector<TweetRecord> kept;
    kept.reserve(records.size());
    for (TweetRecord& rec : records) {
      const bool before = config.study_start && rec.timestamp_utc < *config.study_start;
      const bool after = config.study_end && rec.timestamp_utc >= *config.study_end;
      if (before || after)
        ++result.outside_window;
      else
        kept.push_back(std::move(rec));
    }
    records = std::move(kept);
  }

  sort_by_timestamp(records);
  DedupResult dedup = dedup_repeated(std::move(records));
  result.duplicates_removed = dedup.removed;
  result.bots = flag_bots(dedup.records, config);
  result.records = remove_users(std::move(dedup.records), result.bots.removed);
  return result;
}

}  // namespace tweetflow
