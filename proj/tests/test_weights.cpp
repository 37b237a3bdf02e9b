#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "support/voronoi.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/weights.hpp"

using namespace tweetflow;

namespace {

const std::string kFixtures = TWEETFLOW_FIXTURE_DIR;

std::vector<District> grid4() { return load_districts(kFixtures + "/districts4.geojson"); }

}  // namespace

TEST_CASE("2x2 grid: rook gives 2 neighbors, queen gives 3") {
  const auto districts = grid4();

  const WeightsMatrix rook = build_weights(districts, ContiguityScheme::Rook, false);
  for (std::size_t i = 0; i < rook.size(); ++i) CHECK(rook.neighbors[i].size() == 2);

  const WeightsMatrix queen = build_weights(districts, ContiguityScheme::Queen, false);
  for (std::size_t i = 0; i < queen.size(); ++i) CHECK(queen.neighbors[i].size() == 3);
}

TEST_CASE("row standardization sums rows to one") {
  const auto districts = grid4();
  const WeightsMatrix w = build_weights(districts, ContiguityScheme::Queen, true);
  CHECK(w.row_standardized);
  for (std::size_t i = 0; i < w.size(); ++i) {
    double sum = 0.0;
    for (double v : w.weights[i]) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("fewer than 2 districts is degenerate") {
  auto districts = grid4();
  districts.resize(1);
  CHECK_THROWS_WITH_AS(build_weights(districts, ContiguityScheme::Queen, true),
                       doctest::Contains("degenerate"), config_error);
}

TEST_CASE("random Voronoi fixture: contiguity matches the pairwise oracle") {
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    const auto districts = fixtures::random_voronoi_districts(seed, 50);
    REQUIRE(districts.size() == 50);

    for (const bool rook : {false, true}) {
      const WeightsMatrix w = build_weights(
          districts, rook ? ContiguityScheme::Rook : ContiguityScheme::Queen, false);
      const auto oracle = oracles::pairwise_contiguity(districts, rook);
      for (std::size_t i = 0; i < w.size(); ++i) {
        std::vector<bool> row(w.size(), false);
        for (int j : w.neighbors[i]) row[j] = true;
        for (std::size_t j = 0; j < w.size(); ++j)
          CHECK_MESSAGE(row[j] == oracle[i][j], "seed=", seed, " rook=", rook, " i=", i,
                        " j=", j);
      }
    }
  }
}

TEST_CASE("contiguity is symmetric with a zero diagonal") {
  const auto districts = fixtures::random_voronoi_districts(77, 40);
  const WeightsMatrix w = build_weights(districts, ContiguityScheme::Queen, true);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (int j : w.neighbors[i]) {
      CHECK(j != static_cast<int>(i));
      const auto& back = w.neighbors[j];
      CHECK(std::find(back.begin(), back.end(), static_cast<int>(i)) != back.end());
    }
  }
}

TEST_CASE("islands are flagged and keep empty rows") {
  auto make_district = [](const char* id, double x0, double y0) {
    District d;
    d.district_id = id;
    d.name = id;
    PolygonPart part;
    part.outer = {{x0, y0}, {x0 + 1, y0}, {x0 + 1, y0 + 1}, {x0, y0 + 1}};
    d.polygon.parts.push_back(part);
    d.bounds = bbox_of(d.polygon);
    d.population = 1;
    return d;
  };
  const std::vector<District> districts = {make_district("A", 0, 0), make_district("B", 1, 0),
                                           make_district("C", 50, 50)};
  const WeightsMatrix w = build_weights(districts, ContiguityScheme::Queen, true);
  CHECK(w.islands() == std::vector<int>{2});
  CHECK(w.is_island(2));
  CHECK_FALSE(w.is_island(0));
  CHECK(w.weights[2].empty());
}

TEST_CASE("snap tolerance joins almost-identical boundaries") {
  auto make_district = [](const char* id, double x0) {
    District d;
    d.district_id = id;
    d.name = id;
    PolygonPart part;
    part.outer = {{x0, 0}, {x0 + 1, 0}, {x0 + 1, 1}, {x0, 1}};
    d.polygon.parts.push_back(part);
    d.bounds = bbox_of(d.polygon);
    d.population = 1;
    return d;
  };
  // B's left edge is off by 1e-9 from A's right edge
  std::vector<District> districts = {make_district("A", 0.0), make_district("B", 1.0 + 1e-9)};
  const WeightsMatrix exact = build_weights(districts, ContiguityScheme::Queen, false);
  CHECK(exact.neighbors[0].empty());
  const WeightsMatrix snapped = build_weights(districts, ContiguityScheme::Queen, false, 1e-6);
  CHECK(snapped.neighbors[0] == std::vector<int>{1});
}

TEST_CASE("adjacency text lists neighbors by id") {
  const auto districts = grid4();
  const WeightsMatrix w = build_weights(districts, ContiguityScheme::Rook, false);
  const std::string text = adjacency_text(w);
  CHECK(text == "D1: D2 D3\nD2: D1 D4\nD3: D1 D4\nD4: D2 D3\n");
}
