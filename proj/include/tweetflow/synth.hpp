#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tweetflow/layers.hpp"
#include "tweetflow/record.hpp"

namespace tweetflow {

// Synthetic city on a district grid with planted homes and planted visit
// sets. The seed fully determines the corpus; rerunning a scenario yields
// byte-identical output.
struct SynthScenario {
  std::uint64_t seed = 1;
  int grid_rows = 5;
  int grid_cols = 6;
  double cell_size_deg = 0.02;
  double origin_lon = -73.20;
  double origin_lat = -37.00;
  std::int64_t pop_min = 500;
  std::int64_t pop_max = 20000;
  int n_users = 500;
  int n_spaces = 6;
  double space_size_frac = 0.30;   // space square side / cell side
  double visit_scale = 0.90;       // p(d,s) = min(1, scale * attract_s * exp(-beta*dist))
  double beta_per_km = 0.40;
  double attract_min = 0.50;
  double attract_max = 2.00;
  int night_min = 1;               // night tweets per user, uniform range
  int night_max = 6;
  int day_repeat_max = 2;          // records per visit: 1..day_repeat_max
  int background_min = 0;          // daytime tweets outside any space
  int background_max = 4;
  double noise_fraction = 0.0;     // night tweets emitted away from home
  std::int64_t study_start = 1451606400;  // 2016-01-01T00:00:00Z
  std::int64_t study_end = 1459468800;    // 2016-04-01T00:00:00Z
  int utc_offset_minutes = -180;

  int n_districts() const { return grid_rows * grid_cols; }
};

struct SynthData {
  std::vector<District> districts;
  std::vector<PublicSpace> spaces;
  std::vector<TweetRecord> records;
  std::map<std::string, std::string> truth_homes;                 // user -> district
  std::set<std::pair<std::string, std::string>> truth_visits;     // (user, space)
};

// Throws config_error on infeasible geometry (more spaces than grid cells)
// or invalid rates.
SynthData generate_synthetic(const SynthScenario& scenario);

// districts.geojson, spaces.geojson, records.ndjson, truth_homes.csv,
// truth_visits.csv under out_dir. Returns the file paths written.
std::vector<std::string> write_synthetic(const SynthData& data, const std::string& out_dir);

// Key-value scenario file: "key = value" lines, '#' comments. Instants are
// ISO-8601. Unknown keys are errors.
SynthScenario parse_scenario_file(const std::string& path);

}  // namespace tweetflow
