#pragma once

#include <string>

#include "json.hpp"
#include "tweetflow/geo.hpp"

namespace tweetflow {

// Converts a GeoJSON geometry object (Polygon or MultiPolygon) into a
// MultiPolygon. Validates ring closure and minimum size; throws load_error
// with `context` in the message on invalid input.
MultiPolygon geometry_from_geojson(const nlohmann::json& geometry, const std::string& context);

nlohmann::ordered_json geometry_to_geojson(const MultiPolygon& mp);
nlohmann::ordered_json point_to_geojson(Point p);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace tweetflow
