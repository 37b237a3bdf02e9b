#include "tweetflow/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "tweetflow/errors.hpp"

namespace tweetflow {

const char* to_string(ContiguityScheme s) {
  return s == ContiguityScheme::Queen ? "queen" : "rook";
}

std::vector<int> WeightsMatrix::islands() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < neighbors.size(); ++i)
    if (neighbors[i].empty()) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

struct VertexKey {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const VertexKey&) const = default;
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct EdgeKey {
  VertexKey a;
  VertexKey b;
  bool operator==(const EdgeKey&) const = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    VertexKeyHash vh;
    return vh(k.a) * 1000003u ^ vh(k.b);
  }
};

VertexKey quantize(Point p, double tol) {
  if (tol <= 0.0) {
    // Bit patterns of the exact doubles; identical coordinates collide,
    // nothing else does.
    std::int64_t xb, yb;
    static_assert(sizeof(double) == sizeof(std::int64_t));
    std::memcpy(&xb, &p.lon, sizeof(double));
    std::memcpy(&yb, &p.lat, sizeof(double));
    return {xb, yb};
  }
  return {static_cast<std::int64_t>(std::llround(p.lon / tol)),
          static_cast<std::int64_t>(std::llround(p.lat / tol))};
}

EdgeKey make_edge(VertexKey a, VertexKey b) {
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  return {a, b};
}

template <typename Key, typename Hash>
void connect_shared(const std::unordered_map<Key, std::vector<int>, Hash>& index,
                    std::vector<std::vector<char>>& adjacent) {
  for (const auto& [key, owners] : index) {
    for (std::size_t a = 0; a < owners.size(); ++a)
      for (std::size_t b = a + 1; b < owners.size(); ++b) {
        adjacent[owners[a]][owners[b]] = 1;
        adjacent[owners[b]][owners[a]] = 1;
      }
  }
}

void for_each_ring(const MultiPolygon& mp, const std::function<void(const Ring&)>& fn) {
  for (const PolygonPart& part : mp.parts) {
    fn(part.outer);
    for (const Ring& hole : part.holes) fn(hole);
  }
}

}  // namespace

WeightsMatrix build_weights(const std::vector<District>& districts,
                            ContiguityScheme scheme, bool standardize,
                            double snap_tolerance) {
  const int n = static_cast<int>(districts.size());
  if (n < 2) throw config_error("degenerate weights: need at least 2 districts");

  std::unordered_map<VertexKey, std::vector<int>, VertexKeyHash> vertex_owners;
  std::unordered_map<EdgeKey, std::vector<int>, EdgeKeyHash> edge_owners;

  for (int i = 0; i < n; ++i) {
    for_each_ring(districts[i].polygon, [&](const Ring& ring) {
      const std::size_t m = ring.size();
      for (std::size_t v = 0; v < m; ++v) {
        const VertexKey a = quantize(ring[v], snap_tolerance);
        if (scheme == ContiguityScheme::Queen) {
          auto& owners = vertex_owners[a];
          if (owners.empty() || owners.back() != i) owners.push_back(i);
        } else {
          const VertexKey b = quantize(ring[(v + 1) % m], snap_tolerance);
          auto& owners = edge_owners[make_edge(a, b)];
          if (owners.empty() || owners.back() != i) owners.push_back(i);
        }
      }
    });
  }

  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  if (scheme == ContiguityScheme::Queen)
    connect_shared(vertex_owners, adjacent);
  else
    connect_shared(edge_owners, adjacent);

  WeightsMatrix w;
  w.ids.reserve(n);
  for (const District& d : districts) w.ids.push_back(d.district_id);
  w.neighbors.resize(n);
  w.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i || !adjacent[i][j]) continue;
      w.neighbors[i].push_back(j);
      w.weights[i].push_back(1.0);
    }
  }
  if (standardize) row_standardize(w);
  return w;
}

void row_standardize(WeightsMatrix& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    double sum = 0.0;
    for (double v : w.weights[i]) sum += v;
    if (sum > 0.0)
      for (double& v : w.weights[i]) v /= sum;
  }
  w.row_standardized = true;
}

std::string adjacency_text(const WeightsMatrix& w) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out << w.ids[i] << ":";
    for (int j : w.neighbors[i]) out << ' ' << w.ids[j];
    out << '\n';
  }
  return out.str();
}

}  // namespace tweetflow
