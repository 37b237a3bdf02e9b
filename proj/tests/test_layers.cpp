#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "tweetflow/errors.hpp"
#include "tweetflow/layers.hpp"

using namespace tweetflow;

namespace {

const std::string kFixtures = TWEETFLOW_FIXTURE_DIR;

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("district fixture loads as four districts sorted by id") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");
  REQUIRE(districts.size() == 4);
  CHECK(districts[0].district_id == "D1");
  CHECK(districts[3].district_id == "D4");
  CHECK(districts[0].population == 1000);
  CHECK(districts[0].polygon.parts.size() == 1);
  CHECK(districts[0].polygon.parts[0].outer.size() == 4);  // closing vertex stripped
}

TEST_CASE("missing population property is a load error") {
  CHECK_THROWS_AS(load_districts(kFixtures + "/missing_pop.geojson"), load_error);
  try {
    load_districts(kFixtures + "/missing_pop.geojson");
  } catch (const load_error& e) {
    CHECK(std::string(e.what()).find("population") != std::string::npos);
    CHECK(std::string(e.what()).find("D1") != std::string::npos);
  }
}

TEST_CASE("empty FeatureCollection loads as an empty layer") {
  const auto districts = load_districts(kFixtures + "/empty.geojson");
  CHECK(districts.empty());
}

TEST_CASE("duplicate ids are rejected") {
  const std::string path = write_temp("tf_dup.geojson", R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {"district_id": "X", "name": "a", "population": 1},
       "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}},
      {"type": "Feature", "properties": {"district_id": "X", "name": "b", "population": 2},
       "geometry": {"type": "Polygon", "coordinates": [[[2,2],[3,2],[3,3],[2,2]]]}}
    ]})");
  CHECK_THROWS_WITH_AS(load_districts(path), doctest::Contains("duplicate id"), load_error);
}

TEST_CASE("unclosed rings are rejected") {
  const std::string path = write_temp("tf_open.geojson", R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {"district_id": "X", "name": "a", "population": 1},
       "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,1]]]}}
    ]})");
  CHECK_THROWS_WITH_AS(load_districts(path), doctest::Contains("not closed"), load_error);
}

TEST_CASE("space categories restrict to the six values") {
  const auto spaces = load_spaces(kFixtures + "/spaces2.geojson");
  REQUIRE(spaces.size() == 2);
  CHECK(spaces[0].category == SpaceCategory::Mall);
  CHECK(spaces[1].category == SpaceCategory::Park);

  const std::string path = write_temp("tf_badcat.geojson", R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {"space_id": "S", "name": "s", "category": "Plaza"},
       "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}}
    ]})");
  CHECK_THROWS_WITH_AS(load_spaces(path), doctest::Contains("unknown category"), load_error);

  for (const char* name :
       {"CBD", "Mall", "Leisure", "UniversityCampus", "Transport", "Park"}) {
    const auto parsed = space_category_from_string(name);
    REQUIRE(parsed.has_value());
    CHECK(std::string(to_string(*parsed)) == name);
  }
  CHECK_FALSE(space_category_from_string("mall").has_value());
}

TEST_CASE("point_in_district honors containment and boundary tie-breaks") {
  const auto districts = load_districts(kFixtures + "/districts4.geojson");

  const District* hit = point_in_district({0.5, 0.5}, districts);
  REQUIRE(hit != nullptr);
  CHECK(hit->district_id == "D1");

  CHECK(point_in_district({5.0, 5.0}, districts) == nullptr);

  // point on the shared D1|D2 edge -> lexicographically smallest id wins
  const District* edge = point_in_district({1.0, 0.5}, districts);
  REQUIRE(edge != nullptr);
  CHECK(edge->district_id == "D1");

  // four-corner point (1,1) is claimed by all: D1 wins
  const District* corner = point_in_district({1.0, 1.0}, districts);
  REQUIRE(corner != nullptr);
  CHECK(corner->district_id == "D1");
}

TEST_CASE("zones load in file order") {
  const auto zones = load_zones(kFixtures + "/zones3.geojson");
  REQUIRE(zones.size() == 3);
  CHECK(zones[0].zone_id == "regional");
  CHECK(zones[1].zone_id == "metropolitan");
  CHECK(zones[2].zone_id == "central");
}
