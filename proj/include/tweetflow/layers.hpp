#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tweetflow/geo.hpp"

namespace tweetflow {

struct District {
  std::string district_id;
  std::string name;
  MultiPolygon polygon;
  std::int64_t population = 0;
  Bbox bounds;  // cached for point queries
};

enum class SpaceCategory { CBD, Mall, Leisure, UniversityCampus, Transport, Park };

const char* to_string(SpaceCategory c);
std::optional<SpaceCategory> space_category_from_string(std::string_view s);

struct PublicSpace {
  std::string space_id;
  std::string name;
  SpaceCategory category = SpaceCategory::CBD;
  MultiPolygon polygon;
  Bbox bounds;
};

// Named analysis zone for the summary table (zones may nest or overlap).
struct Zone {
  std::string zone_id;
  std::string name;
  MultiPolygon polygon;
  Bbox bounds;
};

// Layers are sorted by id after load; duplicate ids are rejected. An empty
// FeatureCollection loads as an empty layer with a warning on stderr.
std::vector<District> load_districts(const std::string& path);
std::vector<PublicSpace> load_spaces(const std::string& path);
std::vector<Zone> load_zones(const std::string& path);

struct Layers {
  std::vector<District> districts;
  std::vector<PublicSpace> spaces;
};

Layers load_layers(const std::string& districts_path, const std::string& spaces_path);

// Containment with inclusive boundary; when several districts claim a
// boundary point the lexicographically smallest district_id wins (layers are
// sorted by id, so the first hit is the winner). Returns nullptr on miss.
const District* point_in_district(Point p, const std::vector<District>& districts);
const PublicSpace* point_in_space(Point p, const std::vector<PublicSpace>& spaces);

double mean_latitude(const std::vector<District>& districts);

}  // namespace tweetflow
