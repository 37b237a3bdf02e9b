#include "tweetflow/svg_map.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tweetflow/errors.hpp"

namespace tweetflow {

namespace {

const Palette kQualitative8{
    "qualitative8",
    {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02",
     "#a6761d", "#666666"}};

const Palette kQualitative12{
    "qualitative12",
    {"#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
     "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928"}};

const std::string kLisaHH = "#e31a1c";      // red
const std::string kLisaLL = "#1f78b4";      // dark blue
const std::string kLisaLH = "#a6cee3";      // light blue
const std::string kLisaHL = "#fb9a99";      // pink
const std::string kLisaNS = "#d9d9d9";      // grey
const std::string kLisaIsland = "#ffffff";  // white

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_width(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// lon/lat -> canvas pixels, equirectangular, y flipped, aspect preserved.
class CanvasTransform {
 public:
  CanvasTransform(const Bbox& extent, const CanvasConfig& canvas, double cos_ref)
      : cos_ref_(cos_ref), margin_(canvas.margin) {
    const double w = std::max((extent.lon_max - extent.lon_min) * cos_ref_, 1e-12);
    const double h = std::max(extent.lat_max - extent.lat_min, 1e-12);
    const double sx = (canvas.width - 2.0 * margin_) / w;
    const double sy = (canvas.height - 2.0 * margin_) / h;
    scale_ = std::min(sx, sy);
    x0_ = extent.lon_min * cos_ref_;
    y1_ = extent.lat_max;
  }

  double x(Point p) const { return margin_ + (p.lon * cos_ref_ - x0_) * scale_; }
  double y(Point p) const { return margin_ + (y1_ - p.lat) * scale_; }

 private:
  double cos_ref_;
  double margin_;
  double scale_;
  double x0_;
  double y1_;
};

Bbox layer_extent(const std::vector<District>& districts) {
  Bbox extent{180.0, 90.0, -180.0, -90.0};
  for (const District& d : districts) extent.expand(d.bounds);
  return extent;
}

void open_svg(std::ostringstream& out, const CanvasConfig& canvas, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas.width
      << "\" height=\"" << canvas.height << "\" viewBox=\"0 0 " << canvas.width
      << ' ' << canvas.height << "\">\n"
      << "<title>" << xml_escape(title) << "</title>\n";
}

void ring_path(std::ostringstream& out, const Ring& ring, const CanvasTransform& t) {
  out << 'M';
  bool first = true;
  for (const Point& p : ring) {
    if (!first) out << 'L';
    out << fmt(t.x(p)) << ' ' << fmt(t.y(p));
    first = false;
  }
  out << 'Z';
}

void polygon_paths(std::ostringstream& out, const MultiPolygon& mp,
                   const CanvasTransform& t, const std::string& style) {
  out << "<path d=\"";
  for (const PolygonPart& part : mp.parts) {
    ring_path(out, part.outer, t);
    for (const Ring& hole : part.holes) ring_path(out, hole, t);
  }
  out << "\" " << style << "/>\n";
}

void district_background(std::ostringstream& out, const std::vector<District>& districts,
                         const CanvasTransform& t) {
  out << "<g id=\"districts\">\n";
  for (const District& d : districts)
    polygon_paths(out, d.polygon,
                  t, "fill=\"#f0f0f0\" stroke=\"#bdbdbd\" stroke-width=\"0.5\"");
  out << "</g>\n";
}

}  // namespace

const Palette& qualitative_palette(std::size_t series_count) {
  return series_count <= kQualitative8.colors.size() ? kQualitative8 : kQualitative12;
}

const std::string& lisa_color(LisaLabel label) {
  switch (label) {
    case LisaLabel::HH: return kLisaHH;
    case LisaLabel::LL: return kLisaLL;
    case LisaLabel::LH: return kLisaLH;
    case LisaLabel::HL: return kLisaHL;
    case LisaLabel::NotSignificant: return kLisaNS;
    case LisaLabel::Island: return kLisaIsland;
  }
  return kLisaNS;
}

std::string render_flow_map(const std::string& title,
                            const std::vector<District>& districts,
                            const std::vector<FlowTree>& trees, double width_scale_k,
                            const Palette& palette, const CanvasConfig& canvas) {
  if (width_scale_k <= 0.0) throw config_error("width scale k must be positive");
  if (trees.size() > palette.colors.size()) {
    std::string overflow;
    for (std::size_t i = palette.colors.size(); i < trees.size(); ++i) {
      if (!overflow.empty()) overflow += ", ";
      overflow += trees[i].space_id;
    }
    throw config_error("palette '" + palette.name + "' has " +
                       std::to_string(palette.colors.size()) +
                       " colors for " + std::to_string(trees.size()) +
                       " spaces; unassigned: " + overflow);
  }

  Bbox extent = layer_extent(districts);
  for (const FlowTree& tree : trees) {
    extent.expand(tree.destination);
    for (const FlowNode& n : tree.nodes) extent.expand(n.point);
  }
  const double ref_lat = 0.5 * (extent.lat_min + extent.lat_max);
  const CanvasTransform t(extent, canvas, EquirectFrame(ref_lat).x({1.0, 0.0}));

  std::ostringstream out;
  open_svg(out, canvas, title);
  district_background(out, districts, t);

  for (std::size_t s = 0; s < trees.size(); ++s) {
    const FlowTree& tree = trees[s];
    const std::string& color = palette.colors[s];
    out << "<g id=\"flow-" << xml_escape(tree.space_id) << "\" stroke=\"" << color
        << "\" stroke-linecap=\"round\" fill=\"none\">\n";
    for (const FlowEdge& e : tree_edges(tree)) {
      out << "<line x1=\"" << fmt(t.x(e.from)) << "\" y1=\"" << fmt(t.y(e.from))
          << "\" x2=\"" << fmt(t.x(e.to)) << "\" y2=\"" << fmt(t.y(e.to))
          << "\" stroke-width=\"" << fmt_width(width_scale_k * e.accumulated)
          << "\"/>\n";
    }
    // destination marker
    out << "<circle cx=\"" << fmt(t.x(tree.destination)) << "\" cy=\""
        << fmt(t.y(tree.destination)) << "\" r=\"3\" fill=\"" << color
        << "\" stroke=\"none\"/>\n";
    out << "</g>\n";
  }

  // legend
  out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t s = 0; s < trees.size(); ++s) {
    const double ly = 16.0 + 14.0 * static_cast<double>(s);
    out << "<rect x=\"8\" y=\"" << fmt(ly - 9.0)
        << "\" width=\"10\" height=\"10\" fill=\"" << palette.colors[s] << "\"/>\n"
        << "<text x=\"22\" y=\"" << fmt(ly) << "\">" << xml_escape(trees[s].space_id)
        << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_lisa_map(const std::string& title,
                            const std::vector<District>& districts,
                            const std::map<std::string, LisaLabel>& labels,
                            const CanvasConfig& canvas) {
  const Bbox extent = layer_extent(districts);
  const double ref_lat = 0.5 * (extent.lat_min + extent.lat_max);
  const CanvasTransform t(extent, canvas, EquirectFrame(ref_lat).x({1.0, 0.0}));

  std::ostringstream out;
  open_svg(out, canvas, title);
  out << "<g id=\"clusters\" stroke=\"#636363\" stroke-width=\"0.5\">\n";
  for (const District& d : districts) {
    auto it = labels.find(d.district_id);
    if (it == labels.end())
      throw config_error("district without cluster label: " + d.district_id);
    polygon_paths(out, d.polygon, t,
                  "fill=\"" + lisa_color(it->second) + "\" fill-rule=\"evenodd\"");
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace tweetflow
