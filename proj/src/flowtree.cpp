#include "tweetflow/flowtree.hpp"

#include <algorithm>

#include "json.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/geojson.hpp"

namespace tweetflow {

FlowTree build_flow_tree(const std::string& space_id, Point destination,
                         std::vector<FlowOrigin> origins, double merge_angle_max_deg,
                         const EquirectFrame& frame) {
  FlowTree tree;
  tree.space_id = space_id;
  tree.destination = destination;

  origins.erase(std::remove_if(origins.begin(), origins.end(),
                               [](const FlowOrigin& o) { return o.weight <= 0.0; }),
                origins.end());
  if (origins.empty()) return tree;

  struct Ranked {
    FlowOrigin origin;
    double dist;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(origins.size());
  for (FlowOrigin& o : origins) {
    const double dist = frame.distance(o.point, destination);
    ranked.push_back({std::move(o), dist});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    return a.origin.district_id < b.origin.district_id;
  });

  tree.nodes.reserve(ranked.size());
  for (Ranked& r : ranked) {
    FlowNode node;
    node.district_id = std::move(r.origin.district_id);
    node.point = r.origin.point;
    node.own_weight = r.origin.weight;
    node.dist_to_dest = r.dist;
    tree.nodes.push_back(std::move(node));
  }

  // A line from a far origin runs toward the destination and is absorbed by
  // the nearest node on the way (strictly closer, within the bearing cone);
  // only the strictly-closer rule keeps the tree acyclic.
  for (FlowNode& node : tree.nodes) {
    const double to_dest = frame.bearing_deg(node.point, destination);
    int best = -1;
    double best_dist = 0.0;
    for (int c = 0; c < static_cast<int>(tree.nodes.size()); ++c) {
      const FlowNode& cand = tree.nodes[c];
      if (!(cand.dist_to_dest < node.dist_to_dest)) continue;
      const double to_cand = frame.bearing_deg(node.point, cand.point);
      if (bearing_difference_deg(to_dest, to_cand) > merge_angle_max_deg) continue;
      const double d = frame.distance(node.point, cand.point);
      // Ties go to the candidate closer to the destination, then smaller id.
      if (best == -1 || d < best_dist ||
          (d == best_dist && (cand.dist_to_dest < tree.nodes[best].dist_to_dest ||
                              (cand.dist_to_dest == tree.nodes[best].dist_to_dest &&
                               cand.district_id < tree.nodes[best].district_id)))) {
        best = c;
        best_dist = d;
      }
    }
    // The destination competes at its own distance and wins ties.
    if (best != -1 && node.dist_to_dest <= best_dist) best = -1;
    node.parent = best;
  }

  // Leaf-to-root accumulation; nodes are in descending distance and parents
  // are strictly closer, so every child precedes its parent.
  for (FlowNode& node : tree.nodes) node.edge_weight = node.own_weight;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const int parent = tree.nodes[i].parent;
    if (parent >= 0) tree.nodes[parent].edge_weight += tree.nodes[i].edge_weight;
  }
  return tree;
}

std::vector<FlowEdge> tree_edges(const FlowTree& tree) {
  std::vector<FlowEdge> edges;
  edges.reserve(tree.nodes.size());
  for (const FlowNode& node : tree.nodes) {
    FlowEdge e;
    e.from_district = node.district_id;
    e.from = node.point;
    e.to = node.parent >= 0 ? tree.nodes[node.parent].point : tree.destination;
    e.accumulated = node.edge_weight;
    edges.push_back(std::move(e));
  }
  return edges;
}

std::vector<double> edge_widths(const std::vector<FlowEdge>& edges, double k) {
  if (k <= 0.0) throw config_error("width scale k must be positive");
  std::vector<double> widths;
  widths.reserve(edges.size());
  for (const FlowEdge& e : edges) widths.push_back(k * e.accumulated);
  return widths;
}

std::string flow_tree_geojson(const FlowTree& tree, double k) {
  if (k <= 0.0) throw config_error("width scale k must be positive");
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const FlowEdge& e : tree_edges(tree)) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"from_district", e.from_district},
                       {"space_id", tree.space_id},
                       {"accumulated_weight", e.accumulated},
                       {"width", k * e.accumulated}};
    f["geometry"]["type"] = "LineString";
    f["geometry"]["coordinates"] = {{e.from.lon, e.from.lat}, {e.to.lon, e.to.lat}};
    features.push_back(std::move(f));
  }
  fc["features"] = std::move(features);
  return fc.dump(2) + "\n";
}

}  // namespace tweetflow
