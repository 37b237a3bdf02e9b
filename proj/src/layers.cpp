#include "tweetflow/layers.hpp"

#include <algorithm>
#include <iostream>
#include <unordered_set>

#include "tweetflow/errors.hpp"
#include "tweetflow/geojson.hpp"

namespace tweetflow {

const char* to_string(SpaceCategory c) {
  switch (c) {
    case SpaceCategory::CBD: return "CBD";
    case SpaceCategory::Mall: return "Mall";
    case SpaceCategory::Leisure: return "Leisure";
    case SpaceCategory::UniversityCampus: return "UniversityCampus";
    case SpaceCategory::Transport: return "Transport";
    case SpaceCategory::Park: return "Park";
  }
  return "?";
}

std::optional<SpaceCategory> space_category_from_string(std::string_view s) {
  if (s == "CBD") return SpaceCategory::CBD;
  if (s == "Mall") return SpaceCategory::Mall;
  if (s == "Leisure") return SpaceCategory::Leisure;
  if (s == "UniversityCampus") return SpaceCategory::UniversityCampus;
  if (s == "Transport") return SpaceCategory::Transport;
  if (s == "Park") return SpaceCategory::Park;
  return std::nullopt;
}

namespace {

const nlohmann::json& features_of(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || j.value("type", "") != "FeatureCollection" || !j.contains("features"))
    throw load_error(path + ": not a GeoJSON FeatureCollection");
  const auto& features = j["features"];
  if (!features.is_array()) throw load_error(path + ": features is not an array");
  if (features.empty())
    std::cerr << "warning: empty FeatureCollection: " << path << "\n";
  return features;
}

std::string require_string(const nlohmann::json& props, const char* key,
                           const std::string& context) {
  auto it = props.find(key);
  if (it == props.end())
    throw load_error(context + ": missing property '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw load_error(context + ": property '" + key + "' must be a string");
}

template <typename T>
void sort_and_check_ids(std::vector<T>& items, const std::string& path,
                        std::string T::*id_field) {
  std::sort(items.begin(), items.end(),
            [&](const T& a, const T& b) { return a.*id_field < b.*id_field; });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].*id_field == items[i - 1].*id_field)
      throw load_error(path + ": duplicate id '" + items[i].*id_field + "'");
  }
}

}  // namespace

std::vector<District> load_districts(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  std::vector<District> out;
  for (const auto& f : features_of(j, path)) {
    if (!f.contains("properties") || !f["properties"].is_object())
      throw load_error(path + ": feature without properties");
    const auto& props = f["properties"];
    District d;
    d.district_id = require_string(props, "district_id", path);
    const std::string context = path + ": district '" + d.district_id + "'";
    d.name = require_string(props, "name", context);
    auto pop = props.find("population");
    if (pop == props.end() || !pop->is_number())
      throw load_error(context + ": missing property 'population'");
    if (pop->is_number_float()) {
      const double v = pop->get<double>();
      if (v < 0.0) throw load_error(context + ": negative population");
      d.population = static_cast<std::int64_t>(v);
    } else {
      d.population = pop->get<std::int64_t>();
      if (d.population < 0) throw load_error(context + ": negative population");
    }
    d.polygon = geometry_from_geojson(f.value("geometry", nlohmann::json()), context);
    d.bounds = bbox_of(d.polygon);
    out.push_back(std::move(d));
  }
  sort_and_check_ids(out, path, &District::district_id);
  return out;
}

std::vector<PublicSpace> load_spaces(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  std::vector<PublicSpace> out;
  for (const auto& f : features_of(j, path)) {
    if (!f.contains("properties") || !f["properties"].is_object())
      throw load_error(path + ": feature without properties");
    const auto& props = f["properties"];
    PublicSpace s;
    s.space_id = require_string(props, "space_id", path);
    const std::string context = path + ": space '" + s.space_id + "'";
    s.name = require_string(props, "name", context);
    const std::string cat = require_string(props, "category", context);
    const auto parsed = space_category_from_string(cat);
    if (!parsed)
      throw load_error(context + ": unknown category '" + cat +
                       "' (expected CBD, Mall, Leisure, UniversityCampus, Transport or Park)");
    s.category = *parsed;
    s.polygon = geometry_from_geojson(f.value("geometry", nlohmann::json()), context);
    s.bounds = bbox_of(s.polygon);
    out.push_back(std::move(s));
  }
  sort_and_check_ids(out, path, &PublicSpace::space_id);
  return out;
}

std::vector<Zone> load_zones(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  std::vector<Zone> out;
  for (const auto& f : features_of(j, path)) {
    if (!f.contains("properties") || !f["properties"].is_object())
      throw load_error(path + ": feature without properties");
    const auto& props = f["properties"];
    Zone z;
    z.zone_id = require_string(props, "zone_id", path);
    const std::string context = path + ": zone '" + z.zone_id + "'";
    z.name = require_string(props, "name", context);
    z.polygon = geometry_from_geojson(f.value("geometry", nlohmann::json()), context);
    z.bounds = bbox_of(z.polygon);
    out.push_back(std::move(z));
  }
  // Zones keep file order: summary rows read top to bottom.
  std::unordered_set<std::string> seen;
  for (const Zone& z : out)
    if (!seen.insert(z.zone_id).second)
      throw load_error(path + ": duplicate id '" + z.zone_id + "'");
  return out;
}

Layers load_layers(const std::string& districts_path, const std::string& spaces_path) {
  return {load_districts(districts_path), load_spaces(spaces_path)};
}

const District* point_in_district(Point p, const std::vector<District>& districts) {
  for (const District& d : districts) {
    if (!d.bounds.contains(p)) continue;
    if (point_in_polygon(p, d.polygon)) return &d;
  }
  return nullptr;
}

const PublicSpace* point_in_space(Point p, const std::vector<PublicSpace>& spaces) {
  for (const PublicSpace& s : spaces) {
    if (!s.bounds.contains(p)) continue;
    if (point_in_polygon(p, s.polygon)) return &s;
  }
  return nullptr;
}

double mean_latitude(const std::vector<District>& districts) {
  if (districts.empty()) return 0.0;
  double acc = 0.0;
  for (const District& d : districts)
    acc += 0.5 * (d.bounds.lat_min + d.bounds.lat_max);
  return acc / static_cast<double>(districts.size());
}

}  // namespace tweetflow
