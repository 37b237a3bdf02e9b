#pragma once

#include <string>
#include <vector>

#include "tweetflow/layers.hpp"

namespace tweetflow {

enum class ContiguityScheme { Queen, Rook };

const char* to_string(ContiguityScheme s);

// Contiguity weights over the district layer, unit order = district order
// (sorted by id). Diagonal is zero; the relation is symmetric before row
// standardization. Units without neighbors are islands; their rows stay
// empty.
struct WeightsMatrix {
  std::vector<std::string> ids;
  std::vector<std::vector<int>> neighbors;      // ascending unit indices
  std::vector<std::vector<double>> weights;     // aligned with neighbors
  bool row_standardized = false;

  std::size_t size() const { return ids.size(); }
  bool is_island(std::size_t i) const { return neighbors[i].empty(); }
  std::vector<int> islands() const;
};

// Queen: polygons sharing at least one boundary point (vertex or edge).
// Rook: polygons sharing at least one full edge. Vertices are matched
// exactly; `snap_tolerance` > 0 quantizes coordinates to that grid first for
// layers whose shared boundaries are not bit-identical.
WeightsMatrix build_weights(const std::vector<District>& districts,
                            ContiguityScheme scheme, bool standardize,
                            double snap_tolerance = 0.0);

void row_standardize(WeightsMatrix& w);

// Text adjacency list, one line per unit: "id: neighbor1 neighbor2 ...".
std::string adjacency_text(const WeightsMatrix& w);

}  // namespace tweetflow
