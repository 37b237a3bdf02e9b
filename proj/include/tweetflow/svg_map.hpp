#pragma once

#include <map>
#include <string>
#include <vector>

#include "tweetflow/flowtree.hpp"
#include "tweetflow/layers.hpp"
#include "tweetflow/moran.hpp"

namespace tweetflow {

struct Palette {
  std::string name;
  std::vector<std::string> colors;  // sRGB hex, pairwise distinct
};

// Embedded qualitative palettes; colors are pinned constants so output never
// depends on anything fetched.
const Palette& qualitative_palette(std::size_t series_count);

// Fill colors of the cluster map, fixed: HH red, LL dark blue, LH light
// blue, HL pink, NotSignificant grey, Island white.
const std::string& lisa_color(LisaLabel label);

struct CanvasConfig {
  int width = 900;
  int height = 700;
  double margin = 24.0;
};

// One flow map: district outlines as background, one color per tree (public
// space), stroke widths = k * accumulated edge weight. Deterministic bytes
// for fixed inputs. Throws config_error when the palette has fewer colors
// than trees, listing the overflow.
std::string render_flow_map(const std::string& title,
                            const std::vector<District>& districts,
                            const std::vector<FlowTree>& trees, double width_scale_k,
                            const Palette& palette, const CanvasConfig& canvas);

// Choropleth of cluster labels, one filled polygon per district. Throws
// config_error when a district has no label, naming it.
std::string render_lisa_map(const std::string& title,
                            const std::vector<District>& districts,
                            const std::map<std::string, LisaLabel>& labels,
                            const CanvasConfig& canvas);

}  // namespace tweetflow
