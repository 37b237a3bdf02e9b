#include "support/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "tweetflow/rng.hpp"

namespace fixtures {

using tweetflow::Bbox;
using tweetflow::District;
using tweetflow::MultiPolygon;
using tweetflow::Point;
using tweetflow::PolygonPart;
using tweetflow::Ring;

namespace {

// Clip a convex ring by the half-plane a*x + b*y <= c (Sutherland-Hodgman).
Ring clip_halfplane(const Ring& ring, double a, double b, double c) {
  Ring out;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = ring[i];
    const Point q = ring[(i + 1) % n];
    const double fp = a * p.lon + b * p.lat - c;
    const double fq = a * q.lon + b * q.lat - c;
    const bool in_p = fp <= 0.0;
    const bool in_q = fq <= 0.0;
    if (in_p) out.push_back(p);
    if (in_p != in_q) {
      const double t = fp / (fp - fq);
      out.push_back({p.lon + t * (q.lon - p.lon), p.lat + t * (q.lat - p.lat)});
    }
  }
  return out;
}

// Unify vertices that differ only by floating-point noise so neighboring
// cells share coordinates exactly. Union-find over points within tol.
void snap_shared_vertices(std::vector<Ring>& rings, double tol) {
  struct Entry {
    Point p;
    std::size_t ring;
    std::size_t vertex;
  };
  std::vector<Entry> entries;
  for (std::size_t r = 0; r < rings.size(); ++r)
    for (std::size_t v = 0; v < rings[r].size(); ++v) entries.push_back({rings[r][v], r, v});

  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].p.lon != entries[b].p.lon) return entries[a].p.lon < entries[b].p.lon;
    return entries[a].p.lat < entries[b].p.lat;
  });

  std::vector<std::size_t> parent(entries.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  // sweep over x; points within tol in both axes join one cluster
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Point& pa = entries[order[a]].p;
      const Point& pb = entries[order[b]].p;
      if (pb.lon - pa.lon > tol) break;
      if (std::abs(pb.lat - pa.lat) > tol) continue;
      parent[find(order[b])] = find(order[a]);
    }
  }

  // cluster representative: lexicographically smallest member
  std::vector<Point> representative(entries.size());
  std::vector<bool> has_rep(entries.size(), false);
  for (std::size_t idx : order) {
    const std::size_t root = find(idx);
    const Point& p = entries[idx].p;
    if (!has_rep[root] || p.lon < representative[root].lon ||
        (p.lon == representative[root].lon && p.lat < representative[root].lat)) {
      representative[root] = p;
      has_rep[root] = true;
    }
  }
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const Entry& e = entries[idx];
    rings[e.ring][e.vertex] = representative[find(idx)];
  }

  // drop consecutive duplicates introduced by snapping
  for (Ring& ring : rings) {
    Ring dedup;
    for (const Point& p : ring)
      if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
    if (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
    ring = std::move(dedup);
  }
}

}  // namespace

std::vector<MultiPolygon> voronoi_cells(const std::vector<Point>& sites, const Bbox& box) {
  std::vector<Ring> rings;
  rings.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    Ring cell = {{box.lon_min, box.lat_min},
                 {box.lon_max, box.lat_min},
                 {box.lon_max, box.lat_max},
                 {box.lon_min, box.lat_max}};
    for (std::size_t j = 0; j < sites.size() && !cell.empty(); ++j) {
      if (j == i) continue;
      // closer to site i than to site j
      const double a = 2.0 * (sites[j].lon - sites[i].lon);
      const double b = 2.0 * (sites[j].lat - sites[i].lat);
      const double c = sites[j].lon * sites[j].lon + sites[j].lat * sites[j].lat -
                       sites[i].lon * sites[i].lon - sites[i].lat * sites[i].lat;
      cell = clip_halfplane(cell, a, b, c);
    }
    rings.push_back(std::move(cell));
  }

  snap_shared_vertices(rings, 1e-9);

  std::vector<MultiPolygon> cells;
  cells.reserve(rings.size());
  for (Ring& ring : rings) {
    MultiPolygon mp;
    PolygonPart part;
    part.outer = std::move(ring);
    mp.parts.push_back(std::move(part));
    cells.push_back(std::move(mp));
  }
  return cells;
}

std::vector<District> random_voronoi_districts(std::uint64_t seed, int n_cells,
                                               std::int64_t pop_min, std::int64_t pop_max) {
  tweetflow::Rng rng(seed);
  const Bbox box{0.0, 0.0, 100.0, 100.0};
  std::vector<Point> sites;
  while (static_cast<int>(sites.size()) < n_cells) {
    const Point candidate{rng.uniform(2.0, 98.0), rng.uniform(2.0, 98.0)};
    bool ok = true;
    for (const Point& s : sites) {
      const double dx = s.lon - candidate.lon;
      const double dy = s.lat - candidate.lat;
      if (dx * dx + dy * dy < 1.0) {  // at least 1 unit apart
        ok = false;
        break;
      }
    }
    if (ok) sites.push_back(candidate);
  }

  const auto cells = voronoi_cells(sites, box);
  std::vector<District> districts;
  districts.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    District d;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "V%03zu", i);
    d.district_id = buf;
    d.name = "Cell " + std::to_string(i);
    d.polygon = cells[i];
    d.bounds = tweetflow::bbox_of(d.polygon);
    d.population = pop_min + static_cast<std::int64_t>(rng.bounded(
                                 static_cast<std::uint64_t>(pop_max - pop_min + 1)));
    districts.push_back(std::move(d));
  }
  std::sort(districts.begin(), districts.end(),
            [](const District& a, const District& b) { return a.district_id < b.district_id; });
  return districts;
}

}  // namespace fixtures
