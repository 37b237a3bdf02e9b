#include "doctest.h"

#include <cmath>

#include "tweetflow/errors.hpp"
#include "tweetflow/flowtree.hpp"
#include "tweetflow/rng.hpp"

using namespace tweetflow;

namespace {

const EquirectFrame kFrame(0.0);

// Conservation check straight from the definition.
void check_conservation(const FlowTree& tree) {
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    double children = 0.0;
    for (const FlowNode& other : tree.nodes)
      if (other.parent == static_cast<int>(i)) children += other.edge_weight;
    CHECK(tree.nodes[i].edge_weight == tree.nodes[i].own_weight + children);
  }
}

void check_monotone_trunks(const FlowTree& tree) {
  for (const FlowNode& node : tree.nodes) {
    if (node.parent < 0) continue;
    const FlowNode& parent = tree.nodes[node.parent];
    CHECK(parent.edge_weight >= node.edge_weight);
    CHECK(parent.dist_to_dest < node.dist_to_dest);
  }
}

}  // namespace

TEST_CASE("single origin connects straight to the destination") {
  const FlowTree tree =
      build_flow_tree("S", {0, 0}, {{"D1", {3, 0}, 5.0}}, 45.0, kFrame);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].parent == -1);
  CHECK(tree.nodes[0].edge_weight == 5.0);
  check_conservation(tree);
}

TEST_CASE("collinear origins chain and the trunk carries the sum") {
  // weights 1, 2, 3 at distances 3, 2, 1 on one ray
  const FlowTree tree = build_flow_tree(
      "S", {0, 0},
      {{"far", {3, 0}, 1.0}, {"mid", {2, 0}, 2.0}, {"near", {1, 0}, 3.0}}, 45.0, kFrame);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].district_id == "far");
  CHECK(tree.nodes[1].district_id == "mid");
  CHECK(tree.nodes[2].district_id == "near");
  CHECK(tree.nodes[0].parent == 1);  // far -> mid
  CHECK(tree.nodes[1].parent == 2);  // mid -> near
  CHECK(tree.nodes[2].parent == -1); // near -> destination (trunk)
  CHECK(tree.nodes[0].edge_weight == 1.0);
  CHECK(tree.nodes[1].edge_weight == 3.0);
  CHECK(tree.nodes[2].edge_weight == 6.0);
  check_conservation(tree);
  check_monotone_trunks(tree);
}

TEST_CASE("origins on opposite sides of the destination never merge") {
  const FlowTree tree = build_flow_tree(
      "S", {0, 0}, {{"east", {2, 0}, 1.0}, {"west", {-2, 0}, 1.0}}, 45.0, kFrame);
  REQUIRE(tree.nodes.size() == 2);
  CHECK(tree.nodes[0].parent == -1);
  CHECK(tree.nodes[1].parent == -1);
}

TEST_CASE("the merge cone rejects nodes off the bearing to the destination") {
  // "side" is closer to the destination than "far" but ~51 degrees off the
  // far->destination bearing: rejected at 30, absorbed at 60.
  const std::vector<FlowOrigin> origins = {{"far", {4, 0}, 1.0}, {"side", {2, -2.5}, 1.0}};
  const FlowTree narrow = build_flow_tree("S", {0, 0}, origins, 30.0, kFrame);
  REQUIRE(narrow.nodes.size() == 2);
  CHECK(narrow.nodes[0].district_id == "far");
  CHECK(narrow.nodes[0].parent == -1);
  CHECK(narrow.nodes[1].parent == -1);

  const FlowTree wide = build_flow_tree("S", {0, 0}, origins, 60.0, kFrame);
  CHECK(wide.nodes[0].parent == 1);  // far -> side
  CHECK(wide.nodes[1].parent == -1);
  CHECK(wide.nodes[1].edge_weight == 2.0);
}

TEST_CASE("zero-weight origins are dropped; empty input gives an empty tree") {
  const FlowTree tree = build_flow_tree(
      "S", {0, 0}, {{"a", {1, 0}, 0.0}, {"b", {2, 0}, 0.0}}, 45.0, kFrame);
  CHECK(tree.empty());
  const FlowTree none = build_flow_tree("S", {0, 0}, {}, 45.0, kFrame);
  CHECK(none.empty());
}

TEST_CASE("conservation, monotone trunks and determinism on random origin sets") {
  Rng rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const Point dest{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const int n = 1 + static_cast<int>(rng.bounded(40));
    std::vector<FlowOrigin> origins;
    for (int i = 0; i < n; ++i)
      origins.push_back({"O" + std::to_string(i),
                         {rng.uniform(-10, 10), rng.uniform(-10, 10)},
                         static_cast<double>(rng.bounded(50))});

    const FlowTree a = build_flow_tree("S", dest, origins, 45.0, kFrame);
    const FlowTree b = build_flow_tree("S", dest, origins, 45.0, kFrame);

    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      CHECK(a.nodes[i].district_id == b.nodes[i].district_id);
      CHECK(a.nodes[i].parent == b.nodes[i].parent);
      CHECK(a.nodes[i].edge_weight == b.nodes[i].edge_weight);
      CHECK(a.nodes[i].point == b.nodes[i].point);
    }
    check_conservation(a);
    check_monotone_trunks(a);

    // total inflow at the destination equals the sum of all origin weights
    double total = 0.0, root_inflow = 0.0;
    for (const FlowNode& node : a.nodes) {
      total += node.own_weight;
      if (node.parent == -1) root_inflow += node.edge_weight;
    }
    CHECK(root_inflow == total);
  }
}

TEST_CASE("edges share junction vertices bit-exactly") {
  const FlowTree tree = build_flow_tree(
      "S", {0, 0},
      {{"far", {3, 0.5}, 1.0}, {"mid", {2, 0.25}, 2.0}, {"near", {1, 0}, 3.0}}, 45.0,
      kFrame);
  const auto edges = tree_edges(tree);
  REQUIRE(edges.size() == 3);
  // one segment per node; each child's segment ends exactly at the parent point
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const FlowNode& node = tree.nodes[i];
    if (node.parent >= 0) {
      CHECK(edges[i].to == tree.nodes[node.parent].point);
    } else {
      CHECK(edges[i].to == tree.destination);
    }
    CHECK(edges[i].from == node.point);
  }
}

TEST_CASE("widths are proportional with the shared scale") {
  const FlowTree tree = build_flow_tree(
      "S", {0, 0},
      {{"far", {3, 0}, 1.0}, {"mid", {2, 0}, 2.0}, {"near", {1, 0}, 3.0}}, 45.0, kFrame);
  const auto edges = tree_edges(tree);
  const auto widths = edge_widths(edges, 0.5);
  REQUIRE(widths.size() == 3);
  CHECK(widths[0] == doctest::Approx(0.5));
  CHECK(widths[1] == doctest::Approx(1.5));
  CHECK(widths[2] == doctest::Approx(3.0));  // trunk weight 6 * 0.5

  // doubling every weight doubles every width
  const FlowTree doubled = build_flow_tree(
      "S", {0, 0},
      {{"far", {3, 0}, 2.0}, {"mid", {2, 0}, 4.0}, {"near", {1, 0}, 6.0}}, 45.0, kFrame);
  const auto widths2 = edge_widths(tree_edges(doubled), 0.5);
  for (std::size_t i = 0; i < widths.size(); ++i)
    CHECK(widths2[i] == doctest::Approx(2.0 * widths[i]));

  CHECK_THROWS_AS(edge_widths(edges, 0.0), config_error);
  CHECK_THROWS_AS(edge_widths(edges, -1.0), config_error);
}

TEST_CASE("flow tree geojson carries weights and widths") {
  const FlowTree tree =
      build_flow_tree("S7", {0, 0}, {{"D1", {1, 0}, 4.0}}, 45.0, kFrame);
  const std::string geojson = flow_tree_geojson(tree, 0.25);
  CHECK(geojson.find("\"FeatureCollection\"") != std::string::npos);
  CHECK(geojson.find("\"from_district\": \"D1\"") != std::string::npos);
  CHECK(geojson.find("\"accumulated_weight\": 4.0") != std::string::npos);
  CHECK(geojson.find("\"width\": 1.0") != std::string::npos);
  CHECK(geojson.find("\"LineString\"") != std::string::npos);
}
