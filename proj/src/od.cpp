#include "tweetflow/od.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tweetflow/csv.hpp"

namespace tweetflow {

std::vector<VisitEvent> detect_visits(const std::vector<TweetRecord>& records,
                                      const std::vector<PublicSpace>& spaces,
                                      const NightWindow& window, int utc_offset_minutes) {
  std::map<std::pair<std::string, std::string>, std::int64_t> first_visit;
  for (const TweetRecord& rec : records) {
    if (!is_visit_time(rec.timestamp_utc, utc_offset_minutes, window)) continue;
    const PublicSpace* space = point_in_space({rec.lon, rec.lat}, spaces);
    if (space == nullptr) continue;
    const std::pair<std::string, std::string> key{rec.user_id, space->space_id};
    auto it = first_visit.find(key);
    if (it == first_visit.end())
      first_visit.emplace(key, rec.timestamp_utc);
    else
      it->second = std::min(it->second, rec.timestamp_utc);
  }
  std::vector<VisitEvent> visits;
  visits.reserve(first_visit.size());
  for (const auto& [key, instant] : first_visit)
    visits.push_back({key.first, key.second, instant});
  return visits;
}

FlowMatrix build_od(const std::vector<VisitEvent>& visits,
                    const std::map<std::string, std::string>& homes,
                    const std::map<std::string, std::int64_t>& district_user_counts) {
  FlowMatrix m;
  m.kind = FlowKind::Raw;
  m.district_user_counts = district_user_counts;
  for (const VisitEvent& v : visits) {
    auto home = homes.find(v.user_id);
    if (home == homes.end()) continue;  // unresolved users are excluded
    m.entries[{home->second, v.space_id}] += 1.0;
  }
  return m;
}

FlowMatrix normalize_od(const FlowMatrix& raw) {
  FlowMatrix m;
  m.kind = FlowKind::Normalized;
  m.district_user_counts = raw.district_user_counts;
  for (const auto& [key, value] : raw.entries) {
    auto users = raw.district_user_counts.find(key.first);
    if (users == raw.district_user_counts.end() || users->second <= 0) continue;
    m.entries[key] = value / static_cast<double>(users->second);
  }
  return m;
}

std::string od_csv(const FlowMatrix& m, const std::vector<std::string>& space_ids) {
  std::vector<std::string> sorted_spaces = space_ids;
  std::sort(sorted_spaces.begin(), sorted_spaces.end());
  std::ostringstream out;
  out << "district_id,space_id,value\n";
  for (const auto& [district, users] : m.district_user_counts) {
    if (users <= 0) continue;
    for (const std::string& space : sorted_spaces) {
      const double v = m.at(district, space);
      out << csv_escape(district) << ',' << csv_escape(space) << ','
          << (m.kind == FlowKind::Raw ? std::to_string(static_cast<std::int64_t>(v))
                                      : format_double(v))
          << '\n';
    }
  }
  return out.str();
}

std::string od_marginals_csv(const FlowMatrix& raw, const std::vector<std::string>& space_ids) {
  std::vector<std::string> sorted_spaces = space_ids;
  std::sort(sorted_spaces.begin(), sorted_spaces.end());
  std::ostringstream out;
  out << "space_id,users_total,districts_reached\n";
  for (const std::string& space : sorted_spaces) {
    std::int64_t total = 0;
    std::int64_t reached = 0;
    for (const auto& [key, value] : raw.entries) {
      if (key.second != space) continue;
      total += static_cast<std::int64_t>(value);
      if (value > 0.0) ++reached;
    }
    out << csv_escape(space) << ',' << total << ',' << reached << '\n';
  }
  return out.str();
}

std::string visits_csv(const std::vector<VisitEvent>& visits) {
  std::ostringstream out;
  out << "user_id,space_id,first_visit_utc\n";
  for (const VisitEvent& v : visits)
    out << csv_escape(v.user_id) << ',' << csv_escape(v.space_id) << ','
        << format_iso8601_utc(v.first_visit_utc) << '\n';
  return out.str();
}

std::map<std::string, std::int64_t> visitors_by_home_district(
    const std::vector<VisitEvent>& visits, const std::map<std::string, std::string>& homes) {
  std::set<std::string> counted_users;
  std::map<std::string, std::int64_t> out;
  for (const VisitEvent& v : visits) {
    auto home = homes.find(v.user_id);
    if (home == homes.end()) continue;
    if (counted_users.insert(v.user_id).second) ++out[home->second];
  }
  return out;
}

}  // namespace tweetflow
