#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "support/xmlcheck.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/svg_map.hpp"

using namespace tweetflow;

namespace {

const std::string kFixtures = TWEETFLOW_FIXTURE_DIR;
const EquirectFrame kFrame(0.0);

std::vector<District> districts4() {
  return load_districts(kFixtures + "/districts4.geojson");
}

}  // namespace

TEST_CASE("a single-edge tree renders one line with the computed width") {
  const auto districts = districts4();
  const FlowTree tree =
      build_flow_tree("S1", {0.5, 0.5}, {{"D4", {1.5, 1.5}, 6.0}}, 45.0, kFrame);
  const std::string svg = render_flow_map("one edge", districts, {tree}, 0.5,
                                          qualitative_palette(1), CanvasConfig{});
  std::string err;
  CHECK_MESSAGE(fixtures::xml_well_formed(svg, &err), err);

  const auto widths = fixtures::xml_attribute_values(svg, "stroke-width");
  // background stroke 0.5 for 4 districts + one flow line of width 3
  int flow_lines = 0;
  for (const std::string& w : widths)
    if (w == "3") ++flow_lines;
  CHECK(flow_lines == 1);
}

TEST_CASE("equal weights render at equal widths across maps sharing one scale") {
  const auto districts = districts4();
  const FlowTree a =
      build_flow_tree("S1", {0.5, 0.5}, {{"D4", {1.5, 1.5}, 7.0}}, 45.0, kFrame);
  const FlowTree b =
      build_flow_tree("S2", {1.5, 1.5}, {{"D1", {0.5, 0.5}, 7.0}}, 45.0, kFrame);
  const double k = 0.3;
  const std::string svg_a =
      render_flow_map("a", districts, {a}, k, qualitative_palette(1), CanvasConfig{});
  const std::string svg_b =
      render_flow_map("b", districts, {b}, k, qualitative_palette(1), CanvasConfig{});
  const auto in_a = fixtures::xml_attribute_values(svg_a, "stroke-width");
  const auto in_b = fixtures::xml_attribute_values(svg_b, "stroke-width");
  // the flow width 2.1 appears in both
  CHECK(std::count(in_a.begin(), in_a.end(), "2.1") == 1);
  CHECK(std::count(in_b.begin(), in_b.end(), "2.1") == 1);
}

TEST_CASE("every flow stroke uses a palette color") {
  const auto districts = districts4();
  std::vector<FlowTree> trees;
  trees.push_back(build_flow_tree("S1", {0.5, 0.5}, {{"D4", {1.5, 1.5}, 2.0}}, 45.0, kFrame));
  trees.push_back(build_flow_tree("S2", {1.5, 0.5}, {{"D3", {0.5, 1.5}, 3.0}}, 45.0, kFrame));
  trees.push_back(build_flow_tree("S3", {0.5, 1.5}, {{"D2", {1.5, 0.5}, 4.0}}, 45.0, kFrame));
  trees.push_back(build_flow_tree("S4", {1.5, 1.5}, {{"D1", {0.5, 0.5}, 5.0}}, 45.0, kFrame));

  const Palette& palette = qualitative_palette(6);
  const std::string svg =
      render_flow_map("four trees", districts, trees, 1.0, palette, CanvasConfig{});
  std::string err;
  CHECK_MESSAGE(fixtures::xml_well_formed(svg, &err), err);

  for (const std::string& stroke : fixtures::xml_attribute_values(svg, "stroke")) {
    if (stroke == "#bdbdbd" || stroke == "none") continue;  // background/marker
    CHECK(std::find(palette.colors.begin(), palette.colors.end(), stroke) !=
          palette.colors.end());
  }
}

TEST_CASE("palette overflow is a config error listing unassigned spaces") {
  const auto districts = districts4();
  std::vector<FlowTree> trees;
  for (int i = 0; i < 3; ++i)
    trees.push_back(build_flow_tree("S" + std::to_string(i), {0.5, 0.5},
                                    {{"D4", {1.5, 1.5}, 1.0}}, 45.0, kFrame));
  const Palette tiny{"tiny", {"#111111", "#222222"}};
  CHECK_THROWS_WITH_AS(
      render_flow_map("overflow", districts, trees, 1.0, tiny, CanvasConfig{}),
      doctest::Contains("S2"), config_error);
}

TEST_CASE("identical inputs give identical bytes") {
  const auto districts = districts4();
  const FlowTree tree =
      build_flow_tree("S1", {0.5, 0.5}, {{"D4", {1.5, 1.5}, 6.0}}, 45.0, kFrame);
  const std::string a = render_flow_map("determinism", districts, {tree}, 0.5,
                                        qualitative_palette(1), CanvasConfig{});
  const std::string b = render_flow_map("determinism", districts, {tree}, 0.5,
                                        qualitative_palette(1), CanvasConfig{});
  CHECK(a == b);
}

TEST_CASE("lisa map fills districts by the fixed label colors") {
  const auto districts = districts4();
  std::map<std::string, LisaLabel> labels = {{"D1", LisaLabel::HH},
                                             {"D2", LisaLabel::LL},
                                             {"D3", LisaLabel::LH},
                                             {"D4", LisaLabel::NotSignificant}};
  const std::string svg = render_lisa_map("clusters", districts, labels, CanvasConfig{});
  std::string err;
  CHECK_MESSAGE(fixtures::xml_well_formed(svg, &err), err);

  const auto fills = fixtures::xml_attribute_values(svg, "fill");
  CHECK(std::count(fills.begin(), fills.end(), lisa_color(LisaLabel::HH)) == 1);
  CHECK(std::count(fills.begin(), fills.end(), lisa_color(LisaLabel::LL)) == 1);
  CHECK(std::count(fills.begin(), fills.end(), lisa_color(LisaLabel::LH)) == 1);
  CHECK(std::count(fills.begin(), fills.end(), lisa_color(LisaLabel::NotSignificant)) == 1);
}

TEST_CASE("all NotSignificant renders a uniform grey map") {
  const auto districts = districts4();
  std::map<std::string, LisaLabel> labels;
  for (const District& d : districts) labels[d.district_id] = LisaLabel::NotSignificant;
  const std::string svg = render_lisa_map("grey", districts, labels, CanvasConfig{});
  const auto fills = fixtures::xml_attribute_values(svg, "fill");
  CHECK(std::count(fills.begin(), fills.end(), lisa_color(LisaLabel::NotSignificant)) == 4);
}

TEST_CASE("a district without a label is an error naming it") {
  const auto districts = districts4();
  std::map<std::string, LisaLabel> labels = {{"D1", LisaLabel::HH}};
  CHECK_THROWS_WITH_AS(render_lisa_map("missing", districts, labels, CanvasConfig{}),
                       doctest::Contains("D2"), config_error);
}

TEST_CASE("lisa colors are pairwise distinct; palettes have distinct colors") {
  std::set<std::string> lisa;
  for (LisaLabel label : {LisaLabel::HH, LisaLabel::LL, LisaLabel::LH, LisaLabel::HL,
                          LisaLabel::NotSignificant, LisaLabel::Island})
    lisa.insert(lisa_color(label));
  CHECK(lisa.size() == 6);

  for (std::size_t n : {3u, 6u, 8u, 12u}) {
    const Palette& p = qualitative_palette(n);
    CHECK(p.colors.size() >= n);
    CHECK(std::set<std::string>(p.colors.begin(), p.colors.end()).size() ==
          p.colors.size());
  }
}
