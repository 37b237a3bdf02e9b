#include "tweetflow/geojson.hpp"

#include <fstream>

#include "tweetflow/errors.hpp"

namespace tweetflow {

namespace {

Ring ring_from_coords(const nlohmann::json& coords, const std::string& context) {
  if (!coords.is_array() || coords.size() < 4)
    throw load_error(context + ": invalid ring (need at least 4 positions)");
  Ring ring;
  ring.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
      throw load_error(context + ": invalid ring coordinate");
    const double lon = pos[0].get<double>();
    const double lat = pos[1].get<double>();
    if (!(lon >= -180.0 && lon <= 180.0 && lat >= -90.0 && lat <= 90.0))
      throw load_error(context + ": ring coordinate out of world bounds");
    ring.push_back({lon, lat});
  }
  if (!(ring.front() == ring.back()))
    throw load_error(context + ": invalid ring (not closed)");
  ring.pop_back();  // store without the repeated closing vertex
  if (ring.size() < 3) throw load_error(context + ": invalid ring (degenerate)");
  return ring;
}

PolygonPart part_from_coords(const nlohmann::json& rings, const std::string& context) {
  if (!rings.is_array() || rings.empty())
    throw load_error(context + ": polygon without rings");
  PolygonPart part;
  part.outer = ring_from_coords(rings[0], context);
  for (std::size_t i = 1; i < rings.size(); ++i)
    part.holes.push_back(ring_from_coords(rings[i], context));
  return part;
}

nlohmann::ordered_json ring_to_coords(const Ring& ring) {
  nlohmann::ordered_json coords = nlohmann::ordered_json::array();
  for (const Point& p : ring) coords.push_back({p.lon, p.lat});
  coords.push_back({ring.front().lon, ring.front().lat});
  return coords;
}

}  // namespace

MultiPolygon geometry_from_geojson(const nlohmann::json& geometry, const std::string& context) {
  if (!geometry.is_object() || !geometry.contains("type"))
    throw load_error(context + ": missing geometry");
  const std::string type = geometry["type"].get<std::string>();
  const auto coords = geometry.find("coordinates");
  if (coords == geometry.end())
    throw load_error(context + ": geometry without coordinates");

  MultiPolygon mp;
  if (type == "Polygon") {
    mp.parts.push_back(part_from_coords(*coords, context));
  } else if (type == "MultiPolygon") {
    for (const auto& poly : *coords) mp.parts.push_back(part_from_coords(poly, context));
    if (mp.parts.empty()) throw load_error(context + ": empty MultiPolygon");
  } else {
    throw load_error(context + ": unsupported geometry type " + type);
  }
  return mp;
}

nlohmann::ordered_json geometry_to_geojson(const MultiPolygon& mp) {
  nlohmann::ordered_json g;
  if (mp.parts.size() == 1) {
    g["type"] = "Polygon";
    nlohmann::ordered_json rings = nlohmann::ordered_json::array();
    rings.push_back(ring_to_coords(mp.parts[0].outer));
    for (const Ring& hole : mp.parts[0].holes) rings.push_back(ring_to_coords(hole));
    g["coordinates"] = std::move(rings);
  } else {
    g["type"] = "MultiPolygon";
    nlohmann::ordered_json polys = nlohmann::ordered_json::array();
    for (const PolygonPart& part : mp.parts) {
      nlohmann::ordered_json rings = nlohmann::ordered_json::array();
      rings.push_back(ring_to_coords(part.outer));
      for (const Ring& hole : part.holes) rings.push_back(ring_to_coords(hole));
      polys.push_back(std::move(rings));
    }
    g["coordinates"] = std::move(polys);
  }
  return g;
}

nlohmann::ordered_json point_to_geojson(Point p) {
  nlohmann::ordered_json g;
  g["type"] = "Point";
  g["coordinates"] = {p.lon, p.lat};
  return g;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw load_error("cannot open file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw load_error("invalid JSON in " + path);
  return j;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw load_error("cannot open output file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace tweetflow
