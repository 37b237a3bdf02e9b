#include "tweetflow/home.hpp"

#include <set>
#include <sstream>

#include "tweetflow/csv.hpp"

namespace tweetflow {

std::map<std::string, UserProfile> infer_homes(const std::vector<TweetRecord>& records,
                                               const std::vector<District>& districts,
                                               const NightWindow& window,
                                               int utc_offset_minutes) {
  std::map<std::string, UserProfile> profiles;
  std::map<std::string, std::set<std::pair<double, double>>> locations;

  for (const TweetRecord& rec : records) {
    UserProfile& prof = profiles[rec.user_id];
    prof.user_id = rec.user_id;
    ++prof.total_tweets;
    locations[rec.user_id].insert({rec.lon, rec.lat});

    const District* d = point_in_district({rec.lon, rec.lat}, districts);
    if (d == nullptr) continue;
    ++prof.all_hour_counts[d->district_id];
    if (is_night_tweet(rec.timestamp_utc, utc_offset_minutes, window))
      ++prof.night_counts[d->district_id];
  }

  for (auto& [user, prof] : profiles) {
    prof.distinct_locations = static_cast<std::int64_t>(locations[user].size());
    std::int64_t best_night = 0;
    std::int64_t best_all = -1;
    // night_counts iterates in id order, so equal (night, all) pairs resolve
    // to the smallest district_id.
    for (const auto& [district, night] : prof.night_counts) {
      if (night == 0) continue;
      const auto all_it = prof.all_hour_counts.find(district);
      const std::int64_t all = all_it == prof.all_hour_counts.end() ? 0 : all_it->second;
      if (night > best_night || (night == best_night && all > best_all)) {
        best_night = night;
        best_all = all;
        prof.home_district = district;
        prof.resolved = true;
      }
    }
  }
  return profiles;
}

std::string homes_csv(const std::map<std::string, UserProfile>& profiles) {
  std::ostringstream out;
  out << "user_id,home_district,night_tweets,resolved\n";
  for (const auto& [user, prof] : profiles) {
    out << csv_escape(user) << ',' << csv_escape(prof.home_district) << ','
        << prof.night_tweets_at_home() << ',' << (prof.resolved ? 1 : 0) << '\n';
  }
  return out.str();
}

std::map<std::string, std::string> resolved_homes(
    const std::map<std::string, UserProfile>& profiles) {
  std::map<std::string, std::string> out;
  for (const auto& [user, prof] : profiles)
    if (prof.resolved) out[user] = prof.home_district;
  return out;
}

std::map<std::string, std::int64_t> resolved_user_counts(
    const std::map<std::string, UserProfile>& profiles) {
  std::map<std::string, std::int64_t> out;
  for (const auto& [user, prof] : profiles)
    if (prof.resolved) ++out[prof.home_district];
  return out;
}

std::map<std::string, std::int64_t> moved_user_counts(
    const std::map<std::string, UserProfile>& profiles) {
  std::map<std::string, std::int64_t> out;
  for (const auto& [user, prof] : profiles)
    if (prof.resolved && prof.distinct_locations >= 2) ++out[prof.home_district];
  return out;
}

}  // namespace tweetflow
