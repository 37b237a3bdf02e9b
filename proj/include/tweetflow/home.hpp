#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tweetflow/layers.hpp"
#include "tweetflow/record.hpp"
#include "tweetflow/timewin.hpp"

namespace tweetflow {

struct UserProfile {
  std::string user_id;
  std::int64_t total_tweets = 0;
  std::map<std::string, std::int64_t> night_counts;      // district -> night tweets
  std::map<std::string, std::int64_t> all_hour_counts;   // district -> all tweets
  std::int64_t distinct_locations = 0;
  std::string home_district;                              // empty = unresolved
  bool resolved = false;

  std::int64_t night_tweets_at_home() const {
    auto it = night_counts.find(home_district);
    return it == night_counts.end() ? 0 : it->second;
  }
};

// Builds per-user profiles and assigns each user the district with the most
// night tweets. Ties go to the district with the larger all-hours count,
// then to the smaller district_id. Users without any in-district night tweet
// stay unresolved; night tweets outside every district are ignored.
std::map<std::string, UserProfile> infer_homes(const std::vector<TweetRecord>& records,
                                               const std::vector<District>& districts,
                                               const NightWindow& window,
                                               int utc_offset_minutes);

std::string homes_csv(const std::map<std::string, UserProfile>& profiles);

// user -> home district, resolved users only.
std::map<std::string, std::string> resolved_homes(
    const std::map<std::string, UserProfile>& profiles);

// Resolved users per district (the impact denominator).
std::map<std::string, std::int64_t> resolved_user_counts(
    const std::map<std::string, UserProfile>& profiles);

// Same, counting only users with at least two distinct tweet locations.
std::map<std::string, std::int64_t> moved_user_counts(
    const std::map<std::string, UserProfile>& profiles);

}  // namespace tweetflow
