#pragma once

#include <string>
#include <vector>

#include "tweetflow/geo.hpp"

namespace tweetflow {

struct FlowOrigin {
  std::string district_id;
  Point point;
  double weight = 0.0;
};

struct FlowNode {
  std::string district_id;
  Point point;
  double own_weight = 0.0;
  int parent = -1;           // -1 = the destination node
  double edge_weight = 0.0;  // accumulated weight on the edge to the parent
  double dist_to_dest = 0.0;
};

// Basin-merged tree of flows into one destination. Acyclic with the
// destination as root; every parent is strictly closer to the destination
// than its child; edge weights conserve own weights plus child edges.
struct FlowTree {
  std::string space_id;
  Point destination;
  std::vector<FlowNode> nodes;  // descending distance to destination

  bool empty() const { return nodes.empty(); }
};

// Origins are processed in descending distance to the destination (ties by
// district_id). Each connects to the nearest already-placed node that is
// strictly closer to the destination and within merge_angle_max degrees of
// the origin->destination bearing, falling back to the destination itself.
// Zero-weight origins are dropped.
FlowTree build_flow_tree(const std::string& space_id, Point destination,
                         std::vector<FlowOrigin> origins, double merge_angle_max_deg,
                         const EquirectFrame& frame);

struct FlowEdge {
  std::string from_district;
  Point from;
  Point to;             // parent position (junction or destination)
  double accumulated = 0.0;
};

// One straight segment per parent link; junction vertices are shared
// bit-exactly between incoming and outgoing segments.
std::vector<FlowEdge> tree_edges(const FlowTree& tree);

// Stroke width per edge: width = k * accumulated weight. k must be > 0 and
// is shared by every tree of a map series so maps stay comparable.
std::vector<double> edge_widths(const std::vector<FlowEdge>& edges, double k);

std::string flow_tree_geojson(const FlowTree& tree, double k);

}  // namespace tweetflow
