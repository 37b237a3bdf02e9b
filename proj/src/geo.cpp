#include "tweetflow/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tweetflow {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
constexpr double kEarthRadiusKm = 6371.0088;
}  // namespace

void Bbox::expand(Point p) {
  lon_min = std::min(lon_min, p.lon);
  lat_min = std::min(lat_min, p.lat);
  lon_max = std::max(lon_max, p.lon);
  lat_max = std::max(lat_max, p.lat);
}

void Bbox::expand(const Bbox& other) {
  lon_min = std::min(lon_min, other.lon_min);
  lat_min = std::min(lat_min, other.lat_min);
  lon_max = std::max(lon_max, other.lon_max);
  lat_max = std::max(lat_max, other.lat_max);
}

Bbox bbox_of(const Ring& ring) {
  Bbox b{std::numeric_limits<double>::infinity(),
         std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity()};
  for (const Point& p : ring) b.expand(p);
  return b;
}

Bbox bbox_of(const MultiPolygon& mp) {
  Bbox b{std::numeric_limits<double>::infinity(),
         std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity()};
  for (const PolygonPart& part : mp.parts) b.expand(bbox_of(part.outer));
  return b;
}

bool point_on_segment(Point p, Point a, Point b) {
  const double cross =
      (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  if (cross != 0.0) return false;
  return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
         p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat);
}

namespace {

// Even-odd crossing count contribution of one ring. Returns -1 when the
// point lies on the boundary, otherwise the number of crossings.
int ring_crossings(Point p, const Ring& ring) {
  int crossings = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    if (point_on_segment(p, a, b)) return -1;
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x_int =
          a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x_int) ++crossings;
    }
  }
  return crossings;
}

}  // namespace

bool point_in_polygon(Point p, const MultiPolygon& mp) {
  int crossings = 0;
  for (const PolygonPart& part : mp.parts) {
    const int c = ring_crossings(p, part.outer);
    if (c < 0) return true;
    crossings += c;
    for (const Ring& hole : part.holes) {
      const int h = ring_crossings(p, hole);
      if (h < 0) return true;
      crossings += h;
    }
  }
  return (crossings % 2) == 1;
}

double ring_signed_area(const Ring& ring) {
  double acc = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    acc += a.lon * b.lat - b.lon * a.lat;
  }
  return 0.5 * acc;
}

double part_area(const PolygonPart& part) {
  double area = std::abs(ring_signed_area(part.outer));
  for (const Ring& hole : part.holes) area -= std::abs(ring_signed_area(hole));
  return area;
}

namespace {

// Shoelace first moments of one ring: (Cx*A, Cy*A, A) with signed area A.
void ring_moments(const Ring& ring, double& mx, double& my, double& area) {
  mx = my = area = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    const double w = a.lon * b.lat - b.lon * a.lat;
    area += w;
    mx += (a.lon + b.lon) * w;
    my += (a.lat + b.lat) * w;
  }
  area *= 0.5;
  mx /= 6.0;
  my /= 6.0;
}

}  // namespace

Point polygon_centroid(const MultiPolygon& mp) {
  const PolygonPart* largest = nullptr;
  double largest_area = -1.0;
  for (const PolygonPart& part : mp.parts) {
    const double a = part_area(part);
    if (a > largest_area) {
      largest_area = a;
      largest = &part;
    }
  }
  if (largest == nullptr || largest->outer.empty()) return {};

  double mx, my, area;
  ring_moments(largest->outer, mx, my, area);
  // Orient outer positive, subtract holes.
  if (area < 0.0) {
    area = -area;
    mx = -mx;
    my = -my;
  }
  for (const Ring& hole : largest->holes) {
    double hx, hy, ha;
    ring_moments(hole, hx, hy, ha);
    if (ha < 0.0) {
      ha = -ha;
      hx = -hx;
      hy = -hy;
    }
    area -= ha;
    mx -= hx;
    my -= hy;
  }
  if (std::abs(area) < 1e-30) {
    double sx = 0.0, sy = 0.0;
    for (const Point& p : largest->outer) {
      sx += p.lon;
      sy += p.lat;
    }
    const double n = static_cast<double>(largest->outer.size());
    return {sx / n, sy / n};
  }
  return {mx / area, my / area};
}

EquirectFrame::EquirectFrame(double ref_lat_deg)
    : cos_ref_(std::cos(ref_lat_deg * kDegToRad)) {}

double EquirectFrame::distance(Point a, Point b) const {
  const double dx = x(a) - x(b);
  const double dy = y(a) - y(b);
  return std::sqrt(dx * dx + dy * dy);
}

double EquirectFrame::distance_km(Point a, Point b) const {
  return distance(a, b) * kDegToRad * kEarthRadiusKm;
}

double EquirectFrame::bearing_deg(Point from, Point to) const {
  const double dx = x(to) - x(from);
  const double dy = y(to) - y(from);
  return std::atan2(dy, dx) / kDegToRad;
}

double bearing_difference_deg(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  if (d > 180.0) d = 360.0 - d;
  return d;
}

}  // namespace tweetflow
