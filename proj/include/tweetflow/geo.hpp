#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tweetflow {

struct Point {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.lon == b.lon && a.lat == b.lat;
  }
};

// Vertex list without the repeated closing vertex; the ring is implicitly
// closed between back() and front().
using Ring = std::vector<Point>;

struct PolygonPart {
  Ring outer;
  std::vector<Ring> holes;
};

// Possibly multi-part polygon (GeoJSON Polygon or MultiPolygon).
struct MultiPolygon {
  std::vector<PolygonPart> parts;

  bool empty() const { return parts.empty(); }
};

struct Bbox {
  double lon_min = 0.0, lat_min = 0.0, lon_max = 0.0, lat_max = 0.0;

  bool contains(Point p) const {
    return p.lon >= lon_min && p.lon <= lon_max && p.lat >= lat_min &&
           p.lat <= lat_max;
  }
  void expand(Point p);
  void expand(const Bbox& other);
};

Bbox bbox_of(const Ring& ring);
Bbox bbox_of(const MultiPolygon& mp);

// Exact collinearity + range test; no epsilon.
bool point_on_segment(Point p, Point a, Point b);

// Even-odd containment over all rings of all parts; boundary points are
// inside.
bool point_in_polygon(Point p, const MultiPolygon& mp);

double ring_signed_area(const Ring& ring);

// Planar area of one part: |outer| minus hole areas.
double part_area(const PolygonPart& part);

// Area-weighted centroid of the largest part; vertex mean of that part's
// outer ring when the area is below tolerance.
Point polygon_centroid(const MultiPolygon& mp);

// Equirectangular approximation at a fixed reference latitude. Adequate at
// metropolitan extent; distances are in degrees of longitude-equivalent
// unless scaled by the caller.
class EquirectFrame {
 public:
  explicit EquirectFrame(double ref_lat_deg);

  double x(Point p) const { return p.lon * cos_ref_; }
  double y(Point p) const { return p.lat; }
  double distance(Point a, Point b) const;
  double distance_km(Point a, Point b) const;
  // Direction from `from` to `to` in degrees, atan2 convention (east = 0,
  // counterclockwise positive).
  double bearing_deg(Point from, Point to) const;

 private:
  double cos_ref_;
};

// Absolute angular difference of two bearings, wrapped into [0, 180].
double bearing_difference_deg(double a_deg, double b_deg);

}  // namespace tweetflow
