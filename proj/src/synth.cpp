#include "tweetflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tweetflow/csv.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/geojson.hpp"
#include "tweetflow/rng.hpp"
#include "tweetflow/timewin.hpp"

namespace tweetflow {

namespace {

std::string pad_id(const char* prefix, int index, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, index);
  return buf;
}

MultiPolygon rect_polygon(double lon0, double lat0, double lon1, double lat1) {
  MultiPolygon mp;
  PolygonPart part;
  part.outer = {{lon0, lat0}, {lon1, lat0}, {lon1, lat1}, {lon0, lat1}};
  mp.parts.push_back(std::move(part));
  return mp;
}

struct NightSampler {
  std::int64_t first_day;  // local days, inclusive
  std::int64_t last_day;   // inclusive anchor day; night may spill into +1

  std::int64_t sample_instant(Rng& rng, const NightWindow& window, int utc_offset_minutes) const {
    std::int64_t day;
    do {
      day = first_day + static_cast<std::int64_t>(
                            rng.bounded(static_cast<std::uint64_t>(last_day - first_day + 1)));
    } while (!window.anchored(weekday_from_days(day)));
    // Hour slot 22..31: 22-23 on the anchor day, 0-7 on the next morning.
    const int slot = 22 + static_cast<int>(rng.bounded(10));
    const std::int64_t local_day = slot < 24 ? day : day + 1;
    const int hour = slot < 24 ? slot : slot - 24;
    const std::int64_t local = local_day * 86400 + hour * 3600 +
                               static_cast<std::int64_t>(rng.bounded(60)) * 60 +
                               static_cast<std::int64_t>(rng.bounded(60));
    return local - static_cast<std::int64_t>(utc_offset_minutes) * 60;
  }
};

struct DaySampler {
  std::int64_t first_day;
  std::int64_t last_day;

  std::int64_t sample_instant(Rng& rng, int utc_offset_minutes) const {
    const std::int64_t day =
        first_day + static_cast<std::int64_t>(
                        rng.bounded(static_cast<std::uint64_t>(last_day - first_day + 1)));
    // 09:00-20:59 local is daytime on every weekday.
    const int hour = 9 + static_cast<int>(rng.bounded(12));
    const std::int64_t local = day * 86400 + hour * 3600 +
                               static_cast<std::int64_t>(rng.bounded(60)) * 60 +
                               static_cast<std::int64_t>(rng.bounded(60));
    return local - static_cast<std::int64_t>(utc_offset_minutes) * 60;
  }
};

Point random_point_in_rect(Rng& rng, double lon0, double lat0, double lon1, double lat1,
                           double margin_frac) {
  const double mlon = (lon1 - lon0) * margin_frac;
  const double mlat = (lat1 - lat0) * margin_frac;
  return {rng.uniform(lon0 + mlon, lon1 - mlon), rng.uniform(lat0 + mlat, lat1 - mlat)};
}

std::string record_line(const std::string& id, const std::string& user,
                        std::int64_t epoch_utc, Point p, const std::string& text) {
  std::string line;
  line.reserve(128);
  line += "{\"id\":\"";
  line += id;
  line += "\",\"user\":\"";
  line += user;
  line += "\",\"created_at\":\"";
  line += format_iso8601_utc(epoch_utc);
  line += "\",\"lon\":";
  line += format_double(p.lon);
  line += ",\"lat\":";
  line += format_double(p.lat);
  line += ",\"text\":\"";
  line += text;  // generator texts are plain ASCII, no escaping needed
  line += "\"}";
  return line;
}

}  // namespace

SynthData generate_synthetic(const SynthScenario& sc) {
  if (sc.grid_rows < 1 || sc.grid_cols < 1)
    throw config_error("synth: grid must be at least 1x1");
  if (sc.n_spaces > sc.n_districts())
    throw config_error("synth: more spaces (" + std::to_string(sc.n_spaces) +
                       ") than grid cells (" + std::to_string(sc.n_districts()) + ")");
  if (sc.noise_fraction < 0.0 || sc.noise_fraction >= 1.0)
    throw config_error("synth: noise_fraction must be in [0,1)");
  if (sc.night_min < 0 || sc.night_max < sc.night_min)
    throw config_error("synth: bad night tweet range");
  if (sc.study_start >= sc.study_end)
    throw config_error("synth: study window is empty");

  SynthData data;
  Rng rng(sc.seed);

  // Districts: row-major grid cells. Grid lines are computed once so
  // adjacent cells share boundary coordinates bit-exactly.
  std::vector<double> lon_line(sc.grid_cols + 1), lat_line(sc.grid_rows + 1);
  for (int c = 0; c <= sc.grid_cols; ++c) lon_line[c] = sc.origin_lon + c * sc.cell_size_deg;
  for (int r = 0; r <= sc.grid_rows; ++r) lat_line[r] = sc.origin_lat + r * sc.cell_size_deg;

  const int id_width = sc.n_districts() > 99 ? 3 : 2;
  for (int r = 0; r < sc.grid_rows; ++r) {
    for (int c = 0; c < sc.grid_cols; ++c) {
      const int idx = r * sc.grid_cols + c;
      District d;
      d.district_id = pad_id("D", idx, id_width);
      d.name = "District " + std::to_string(idx);
      d.polygon = rect_polygon(lon_line[c], lat_line[r], lon_line[c + 1], lat_line[r + 1]);
      d.bounds = bbox_of(d.polygon);
      d.population =
          sc.pop_min + static_cast<std::int64_t>(
                           rng.bounded(static_cast<std::uint64_t>(sc.pop_max - sc.pop_min + 1)));
      data.districts.push_back(std::move(d));
    }
  }

  // Spaces: distinct cells, square footprint inside the cell, categories
  // cycling through the six.
  std::vector<int> cells(sc.n_districts());
  for (int i = 0; i < sc.n_districts(); ++i) cells[i] = i;
  for (int i = 0; i < sc.n_spaces; ++i) {
    const int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(cells.size() - i)));
    std::swap(cells[i], cells[j]);
  }
  static constexpr SpaceCategory kCategories[6] = {
      SpaceCategory::CBD,       SpaceCategory::Mall,      SpaceCategory::Leisure,
      SpaceCategory::UniversityCampus, SpaceCategory::Transport, SpaceCategory::Park};
  std::vector<double> attractiveness(sc.n_spaces);
  for (int s = 0; s < sc.n_spaces; ++s) {
    const int cell = cells[s];
    const District& host = data.districts[cell];
    PublicSpace ps;
    ps.space_id = pad_id("S", s, 2);
    ps.name = "Space " + std::to_string(s);
    ps.category = kCategories[s % 6];
    const double side = sc.cell_size_deg * sc.space_size_frac;
    const double cx = 0.5 * (host.bounds.lon_min + host.bounds.lon_max);
    const double cy = 0.5 * (host.bounds.lat_min + host.bounds.lat_max);
    ps.polygon = rect_polygon(cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2);
    ps.bounds = bbox_of(ps.polygon);
    data.spaces.push_back(std::move(ps));
    attractiveness[s] = rng.uniform(sc.attract_min, sc.attract_max);
  }
  // layer contract: sorted by id (pad_id already sorts, but keep it explicit)
  std::sort(data.spaces.begin(), data.spaces.end(),
            [](const PublicSpace& a, const PublicSpace& b) { return a.space_id < b.space_id; });

  std::int64_t total_pop = 0;
  for (const District& d : data.districts) total_pop += d.population;

  const EquirectFrame frame(sc.origin_lat + 0.5 * sc.grid_rows * sc.cell_size_deg);
  std::vector<Point> district_centers(data.districts.size());
  for (std::size_t i = 0; i < data.districts.size(); ++i)
    district_centers[i] = polygon_centroid(data.districts[i].polygon);
  std::vector<Point> space_centers(data.spaces.size());
  for (std::size_t s = 0; s < data.spaces.size(); ++s)
    space_centers[s] = polygon_centroid(data.spaces[s].polygon);

  // Stay one day inside both window edges so night spillover and offsets
  // cannot escape the study window.
  const std::int64_t first_day = to_local(sc.study_start, sc.utc_offset_minutes).day + 1;
  const std::int64_t last_day = to_local(sc.study_end, sc.utc_offset_minutes).day - 2;
  if (last_day - first_day < 14)
    throw config_error("synth: study window too short (need at least ~17 days)");
  const NightSampler night{first_day, last_day};
  const DaySampler day{first_day, last_day};
  const NightWindow window;

  const int user_width = sc.n_users > 9999 ? 6 : 4;
  int record_index = 0;
  auto next_record_id = [&]() { return pad_id("t", record_index++, 7); };

  for (int u = 0; u < sc.n_users; ++u) {
    const std::string user_id = pad_id("u", u, user_width);

    // home district sampled proportionally to population
    std::int64_t ticket =
        static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(total_pop)));
    std::size_t home = 0;
    while (home + 1 < data.districts.size() && ticket >= data.districts[home].population) {
      ticket -= data.districts[home].population;
      ++home;
    }
    const District& home_district = data.districts[home];
    data.truth_homes[user_id] = home_district.district_id;

    const int n_night =
        sc.night_min + static_cast<int>(rng.bounded(
                           static_cast<std::uint64_t>(sc.night_max - sc.night_min + 1)));
    for (int t = 0; t < n_night; ++t) {
      std::size_t cell = home;
      if (sc.noise_fraction > 0.0 && rng.uniform() < sc.noise_fraction &&
          data.districts.size() > 1) {
        cell = rng.bounded(data.districts.size() - 1);
        if (cell >= home) ++cell;
      }
      const Bbox& b = data.districts[cell].bounds;
      const Point p = random_point_in_rect(rng, b.lon_min, b.lat_min, b.lon_max, b.lat_max, 0.05);
      const std::int64_t when = night.sample_instant(rng, window, sc.utc_offset_minutes);
      TweetRecord rec;
      rec.record_id = next_record_id();
      rec.user_id = user_id;
      rec.timestamp_utc = when;
      rec.lon = p.lon;
      rec.lat = p.lat;
      rec.text = "night note " + rec.record_id;
      rec.raw_line = record_line(rec.record_id, user_id, when, p, rec.text);
      data.records.push_back(std::move(rec));
    }

    // planted visits with distance-decay probability
    for (std::size_t s = 0; s < data.spaces.size(); ++s) {
      const double dist_km = frame.distance_km(district_centers[home], space_centers[s]);
      const double p_visit =
          std::min(1.0, sc.visit_scale * attractiveness[s] * std::exp(-sc.beta_per_km * dist_km));
      if (rng.uniform() >= p_visit) continue;
      data.truth_visits.insert({user_id, data.spaces[s].space_id});
      const int n_rec = 1 + static_cast<int>(rng.bounded(
                                static_cast<std::uint64_t>(std::max(1, sc.day_repeat_max))));
      for (int t = 0; t < n_rec; ++t) {
        const Bbox& b = data.spaces[s].bounds;
        const Point p =
            random_point_in_rect(rng, b.lon_min, b.lat_min, b.lon_max, b.lat_max, 0.10);
        const std::int64_t when = day.sample_instant(rng, sc.utc_offset_minutes);
        TweetRecord rec;
        rec.record_id = next_record_id();
        rec.user_id = user_id;
        rec.timestamp_utc = when;
        rec.lon = p.lon;
        rec.lat = p.lat;
        rec.text = "visit note " + rec.record_id;
        rec.raw_line = record_line(rec.record_id, user_id, when, p, rec.text);
        data.records.push_back(std::move(rec));
      }
    }

    // daytime background chatter at home, kept outside every space polygon
    const int n_bg = sc.background_min +
                     static_cast<int>(rng.bounded(static_cast<std::uint64_t>(
                         sc.background_max - sc.background_min + 1)));
    for (int t = 0; t < n_bg; ++t) {
      const Bbox& b = home_district.bounds;
      Point p;
      int guard = 0;
      do {
        p = random_point_in_rect(rng, b.lon_min, b.lat_min, b.lon_max, b.lat_max, 0.05);
      } while (point_in_space(p, data.spaces) != nullptr && ++guard < 64);
      if (guard >= 64) continue;
      const std::int64_t when = day.sample_instant(rng, sc.utc_offset_minutes);
      TweetRecord rec;
      rec.record_id = next_record_id();
      rec.user_id = user_id;
      rec.timestamp_utc = when;
      rec.lon = p.lon;
      rec.lat = p.lat;
      rec.text = "day note " + rec.record_id;
      rec.raw_line = record_line(rec.record_id, user_id, when, p, rec.text);
      data.records.push_back(std::move(rec));
    }
  }

  return data;
}

namespace {

nlohmann::ordered_json districts_to_geojson(const std::vector<District>& districts) {
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const District& d : districts) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"district_id", d.district_id},
                       {"name", d.name},
                       {"population", d.population}};
    f["geometry"] = geometry_to_geojson(d.polygon);
    features.push_back(std::move(f));
  }
  fc["features"] = std::move(features);
  return fc;
}

nlohmann::ordered_json spaces_to_geojson(const std::vector<PublicSpace>& spaces) {
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const PublicSpace& s : spaces) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"space_id", s.space_id},
                       {"name", s.name},
                       {"category", to_string(s.category)}};
    f["geometry"] = geometry_to_geojson(s.polygon);
    features.push_back(std::move(f));
  }
  fc["features"] = std::move(features);
  return fc;
}

}  // namespace

std::vector<std::string> write_synthetic(const SynthData& data, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  const std::string districts_path = (fs::path(out_dir) / "districts.geojson").string();
  write_json_file(districts_path, districts_to_geojson(data.districts));
  written.push_back(districts_path);

  const std::string spaces_path = (fs::path(out_dir) / "spaces.geojson").string();
  write_json_file(spaces_path, spaces_to_geojson(data.spaces));
  written.push_back(spaces_path);

  const std::string records_path = (fs::path(out_dir) / "records.ndjson").string();
  write_ndjson(records_path, data.records);
  written.push_back(records_path);

  std::ostringstream homes;
  homes << "user_id,district_id\n";
  for (const auto& [user, district] : data.truth_homes)
    homes << user << ',' << district << '\n';
  const std::string homes_path = (fs::path(out_dir) / "truth_homes.csv").string();
  write_text_file(homes_path, homes.str());
  written.push_back(homes_path);

  std::ostringstream visits;
  visits << "user_id,space_id\n";
  for (const auto& [user, space] : data.truth_visits) visits << user << ',' << space << '\n';
  const std::string visits_path = (fs::path(out_dir) / "truth_visits.csv").string();
  write_text_file(visits_path, visits.str());
  written.push_back(visits_path);

  return written;
}

SynthScenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw load_error("cannot open scenario file: " + path);
  SynthScenario sc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw config_error(path + ":" + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto bad = [&](const std::string& what) {
      return config_error(path + ":" + std::to_string(line_no) + ": " + what);
    };
    try {
      if (key == "seed") sc.seed = std::stoull(value);
      else if (key == "grid_rows") sc.grid_rows = std::stoi(value);
      else if (key == "grid_cols") sc.grid_cols = std::stoi(value);
      else if (key == "cell_size_deg") sc.cell_size_deg = std::stod(value);
      else if (key == "origin_lon") sc.origin_lon = std::stod(value);
      else if (key == "origin_lat") sc.origin_lat = std::stod(value);
      else if (key == "pop_min") sc.pop_min = std::stoll(value);
      else if (key == "pop_max") sc.pop_max = std::stoll(value);
      else if (key == "n_users") sc.n_users = std::stoi(value);
      else if (key == "n_spaces") sc.n_spaces = std::stoi(value);
      else if (key == "space_size_frac") sc.space_size_frac = std::stod(value);
      else if (key == "visit_scale") sc.visit_scale = std::stod(value);
      else if (key == "beta_per_km") sc.beta_per_km = std::stod(value);
      else if (key == "attract_min") sc.attract_min = std::stod(value);
      else if (key == "attract_max") sc.attract_max = std::stod(value);
      else if (key == "night_min") sc.night_min = std::stoi(value);
      else if (key == "night_max") sc.night_max = std::stoi(value);
      else if (key == "day_repeat_max") sc.day_repeat_max = std::stoi(value);
      else if (key == "background_min") sc.background_min = std::stoi(value);
      else if (key == "background_max") sc.background_max = std::stoi(value);
      else if (key == "noise_fraction") sc.noise_fraction = std::stod(value);
      else if (key == "utc_offset_minutes") sc.utc_offset_minutes = std::stoi(value);
      else if (key == "study_start" || key == "study_end") {
        std::string err;
        const auto parsed = parse_iso8601(value, &err);
        if (!parsed) throw bad(key + ": " + err);
        (key == "study_start" ? sc.study_start : sc.study_end) = *parsed;
      } else {
        throw bad("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw bad("invalid value for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw bad("value out of range for '" + key + "'");
    }
  }
  return sc;
}

}  // namespace tweetflow
