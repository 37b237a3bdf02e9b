#include "doctest.h"

#include <algorithm>

#include "tweetflow/home.hpp"
#include "tweetflow/rng.hpp"
#include "tweetflow/timewin.hpp"

using namespace tweetflow;

namespace {

const std::string kFixtures = TWEETFLOW_FIXTURE_DIR;
constexpr int kOffset = -180;

// Local instant on a given 2016-01 weekday (0 = Monday 2016-01-04).
std::int64_t at_local(int days_from_monday, int hour, int minute) {
  const std::int64_t day = days_from_civil(2016, 1, 4) + days_from_monday;
  return day * 86400 + hour * 3600 + minute * 60 - static_cast<std::int64_t>(kOffset) * 60;
}

TweetRecord rec(const std::string& user, std::int64_t ts, double lon, double lat) {
  static int counter = 0;
  TweetRecord r;
  r.record_id = "h" + std::to_string(counter++);
  r.user_id = user;
  r.timestamp_utc = ts;
  r.lon = lon;
  r.lat = lat;
  r.text = r.record_id;
  return r;
}

}  // namespace

TEST_CASE("home is the district with the most night tweets") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  std::vector<TweetRecord> records;
  // 5 night tweets in D3 (0.5, 1.5), 2 in D2 (1.5, 0.5)
  for (int i = 0; i < 5; ++i) records.push_back(rec("u", at_local(0, 22, i), 0.5, 1.5));
  for (int i = 0; i < 2; ++i) records.push_back(rec("u", at_local(1, 23, i), 1.5, 0.5));

  const auto profiles = infer_homes(records, districts, NightWindow{}, kOffset);
  const UserProfile& prof = profiles.at("u");
  CHECK(prof.resolved);
  CHECK(prof.home_district == "D3");
  CHECK(prof.night_counts.at("D3") == 5);
  CHECK(prof.night_tweets_at_home() == 5);
}

TEST_CASE("users without night tweets stay unresolved") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  std::vector<TweetRecord> records = {rec("u", at_local(5, 12, 0), 0.5, 0.5)};  // Saturday noon
  const auto profiles = infer_homes(records, districts, NightWindow{}, kOffset);
  CHECK_FALSE(profiles.at("u").resolved);
  CHECK(profiles.at("u").home_district.empty());
}

TEST_CASE("night tweets outside every district are ignored") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  std::vector<TweetRecord> records = {rec("u", at_local(0, 23, 0), 50.0, 50.0)};
  const auto profiles = infer_homes(records, districts, NightWindow{}, kOffset);
  CHECK_FALSE(profiles.at("u").resolved);
}

TEST_CASE("night-count ties break by all-hours count, then by district id") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");

  // tie in night counts (1 each in D1 and D2), but D2 has more daytime tweets
  std::vector<TweetRecord> tie_by_total = {
      rec("u", at_local(0, 23, 0), 0.5, 0.5),   // night in D1
      rec("u", at_local(1, 23, 0), 1.5, 0.5),   // night in D2
      rec("u", at_local(2, 12, 0), 1.5, 0.5),   // day in D2
      rec("u", at_local(2, 13, 0), 1.5, 0.5),   // day in D2
  };
  auto profiles = infer_homes(tie_by_total, districts, NightWindow{}, kOffset);
  CHECK(profiles.at("u").home_district == "D2");

  // full tie: smallest district id wins
  std::vector<TweetRecord> full_tie = {
      rec("u", at_local(0, 23, 0), 1.5, 0.5),   // night in D2
      rec("u", at_local(1, 23, 0), 0.5, 0.5),   // night in D1
  };
  profiles = infer_homes(full_tie, districts, NightWindow{}, kOffset);
  CHECK(profiles.at("u").home_district == "D1");
}

TEST_CASE("argmax soundness: no district beats the assigned home") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  Rng rng(99);
  std::vector<TweetRecord> records;
  for (int u = 0; u < 25; ++u) {
    const std::string user = "user" + std::to_string(u);
    const int n = 1 + static_cast<int>(rng.bounded(10));
    for (int i = 0; i < n; ++i) {
      const double lon = rng.uniform(0.05, 1.95);
      const double lat = rng.uniform(0.05, 1.95);
      records.push_back(rec(user, at_local(static_cast<int>(rng.bounded(4)), 22, i), lon, lat));
    }
  }
  const auto profiles = infer_homes(records, districts, NightWindow{}, kOffset);
  for (const auto& [user, prof] : profiles) {
    if (!prof.resolved) continue;
    const std::int64_t home_count = prof.night_counts.at(prof.home_district);
    for (const auto& [district, count] : prof.night_counts)
      CHECK(count <= home_count);
  }
}

TEST_CASE("inference does not depend on record order") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  Rng rng(123);
  std::vector<TweetRecord> records;
  for (int u = 0; u < 10; ++u)
    for (int i = 0; i < 6; ++i)
      records.push_back(rec("user" + std::to_string(u),
                            at_local(static_cast<int>(rng.bounded(4)), 22 , i),
                            rng.uniform(0.05, 1.95), rng.uniform(0.05, 1.95)));

  const auto before = infer_homes(records, districts, NightWindow{}, kOffset);

  // deterministic shuffle
  for (std::size_t i = records.size(); i > 1; --i)
    std::swap(records[i - 1], records[rng.bounded(i)]);
  const auto after = infer_homes(records, districts, NightWindow{}, kOffset);

  REQUIRE(before.size() == after.size());
  for (const auto& [user, prof] : before) {
    CHECK(after.at(user).resolved == prof.resolved);
    CHECK(after.at(user).home_district == prof.home_district);
  }
}

TEST_CASE("homes csv lists resolved flags") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  std::vector<TweetRecord> records = {
      rec("a", at_local(0, 23, 0), 0.5, 0.5),
      rec("b", at_local(5, 12, 0), 0.5, 0.5),
  };
  const auto profiles = infer_homes(records, districts, NightWindow{}, kOffset);
  const std::string csv = homes_csv(profiles);
  CHECK(csv == "user_id,home_district,night_tweets,resolved\n"
               "a,D1,1,1\n"
               "b,,0,0\n");
  CHECK(resolved_homes(profiles).size() == 1);
  CHECK(resolved_user_counts(profiles).at("D1") == 1);
}
