#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tweetflow/layers.hpp"
#include "tweetflow/record.hpp"
#include "tweetflow/timewin.hpp"

namespace tweetflow {

struct VisitEvent {
  std::string user_id;
  std::string space_id;
  std::int64_t first_visit_utc = 0;
};

// A visit is a record inside a space polygon whose local time falls in the
// visit window (the complement of the night window). Repeat visits collapse
// to one event per (user, space) keeping the earliest instant.
std::vector<VisitEvent> detect_visits(const std::vector<TweetRecord>& records,
                                      const std::vector<PublicSpace>& spaces,
                                      const NightWindow& window, int utc_offset_minutes);

enum class FlowKind { Raw, Normalized };

struct FlowMatrix {
  FlowKind kind = FlowKind::Raw;
  // (district_id, space_id) -> value; raw entries are distinct-user counts.
  std::map<std::pair<std::string, std::string>, double> entries;
  std::map<std::string, std::int64_t> district_user_counts;

  double at(const std::string& district, const std::string& space) const {
    auto it = entries.find({district, space});
    return it == entries.end() ? 0.0 : it->second;
  }
};

// raw(d,s) = distinct users with home d and a visit at s; unresolved users
// contribute nothing. district_user_counts carries the denominator used
// later for normalization.
FlowMatrix build_od(const std::vector<VisitEvent>& visits,
                    const std::map<std::string, std::string>& homes,
                    const std::map<std::string, std::int64_t>& district_user_counts);

// Divides each row by its district's user count. Districts with a zero
// denominator are absent from the output rather than zero-filled.
FlowMatrix normalize_od(const FlowMatrix& raw);

// Dense CSV (district_id, space_id, value) over districts with a positive
// denominator crossed with all space ids, sorted.
std::string od_csv(const FlowMatrix& m, const std::vector<std::string>& space_ids);

// Per-space totals: space_id, users_total, districts_reached.
std::string od_marginals_csv(const FlowMatrix& raw, const std::vector<std::string>& space_ids);

std::string visits_csv(const std::vector<VisitEvent>& visits);

// Distinct users per home district with at least one visit anywhere; the y
// variable of the bivariate association analysis.
std::map<std::string, std::int64_t> visitors_by_home_district(
    const std::vector<VisitEvent>& visits, const std::map<std::string, std::string>& homes);

}  // namespace tweetflow
