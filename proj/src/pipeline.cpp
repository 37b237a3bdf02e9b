#include "tweetflow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

#include "tweetflow/csv.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/geojson.hpp"
#include "tweetflow/svg_map.hpp"
#include "tweetflow/timewin.hpp"

namespace fs = std::filesystem;

namespace tweetflow {

const std::vector<std::string> kStageNames = {
    "clean", "summarize", "homes", "moran", "flows", "flowmap", "render"};

namespace paths {

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

std::string cleaned(const std::string& d) { return join(d, "cleaned.ndjson"); }
std::string bots(const std::string& d) { return join(d, "bots.csv"); }
std::string summary(const std::string& d) { return join(d, "summary.csv"); }
std::string homes(const std::string& d) { return join(d, "homes.csv"); }
std::string moran(const std::string& d) { return join(d, "moran.csv"); }
std::string moran_global(const std::string& d) { return join(d, "moran_global.txt"); }
std::string lisa_geojson(const std::string& d) { return join(d, "lisa.geojson"); }
std::string weights(const std::string& d) { return join(d, "weights.txt"); }
std::string visits(const std::string& d) { return join(d, "visits.csv"); }
std::string od_raw(const std::string& d) { return join(d, "od_raw.csv"); }
std::string od_normalized(const std::string& d) { return join(d, "od_normalized.csv"); }
std::string od_marginals(const std::string& d) { return join(d, "od_marginals.csv"); }
std::string manifest(const std::string& d) { return join(d, "manifest.json"); }

}  // namespace paths

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["records"] = c.records_path;
  j["districts"] = c.districts_path;
  j["spaces"] = c.spaces_path;
  j["zones"] = c.zones_path;
  j["out_dir"] = c.out_dir;
  j["study_start"] = c.study_start ? format_iso8601_utc(*c.study_start) : "";
  j["study_end"] = c.study_end ? format_iso8601_utc(*c.study_end) : "";
  j["utc_offset_minutes"] = c.utc_offset_minutes;
  j["bot_threshold"] = c.bot_threshold;
  j["bot_allow"] = c.bot_allow_path;
  j["bot_deny"] = c.bot_deny_path;
  j["contiguity"] = to_string(c.scheme);
  j["snap_tolerance"] = c.snap_tolerance;
  j["permutations"] = c.permutations;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["tail"] = c.tail == PermutationTail::Symmetric ? "symmetric" : "directed";
  j["swap_xy"] = c.swap_xy;
  j["merge_angle_max_deg"] = c.merge_angle_max_deg;
  j["width_scale_k"] = c.width_scale_k;
  j["impact_width_scale_k"] = c.impact_width_scale_k;
  j["impact_denominator"] = c.impact_denominator;
  j["threads"] = c.threads;
  return j;
}

namespace {

std::set<std::string> read_user_list(const std::string& path) {
  std::set<std::string> users;
  if (path.empty()) return users;
  std::ifstream in(path);
  if (!in) throw load_error("cannot open user list: " + path);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' '))
      line.pop_back();
    if (!line.empty() && line[0] != '#') users.insert(line);
  }
  return users;
}

}  // namespace

CleaningConfig cleaning_config(const RunConfig& config) {
  CleaningConfig cc;
  cc.study_start = config.study_start;
  cc.study_end = config.study_end;
  cc.utc_offset_minutes = config.utc_offset_minutes;
  cc.bot_threshold = config.bot_threshold;
  cc.bot_allow = read_user_list(config.bot_allow_path);
  cc.bot_deny = read_user_list(config.bot_deny_path);
  return cc;
}

std::vector<Zone> zones_or_default(const RunConfig& config,
                                   const std::vector<District>& districts) {
  if (!config.zones_path.empty()) return load_zones(config.zones_path);
  Bbox extent{180.0, 90.0, -180.0, -90.0};
  for (const District& d : districts) extent.expand(d.bounds);
  Zone z;
  z.zone_id = "study_area";
  z.name = "Study area";
  PolygonPart part;
  part.outer = {{extent.lon_min, extent.lat_min},
                {extent.lon_max, extent.lat_min},
                {extent.lon_max, extent.lat_max},
                {extent.lon_min, extent.lat_max}};
  z.polygon.parts.push_back(std::move(part));
  z.bounds = extent;
  return {std::move(z)};
}

std::map<std::string, std::string> read_homes_csv(const std::string& path) {
  std::map<std::string, std::string> homes;
  const auto rows = read_csv(path);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 4) throw load_error(path + ": malformed row");
    if (row[3] == "1") homes[row[0]] = row[1];
  }
  return homes;
}

FlowMatrix read_od_csv(const std::string& path, FlowKind kind) {
  FlowMatrix m;
  m.kind = kind;
  const auto rows = read_csv(path);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 3) throw load_error(path + ": malformed row");
    const double v = std::stod(row[2]);
    m.entries[{row[0], row[1]}] = v;
    m.district_user_counts.emplace(row[0], 0);  // presence only; counts unknown
  }
  return m;
}

std::vector<FlowTree> build_trees(const FlowMatrix& m, const std::vector<District>& districts,
                                  const std::vector<PublicSpace>& spaces,
                                  double merge_angle_max_deg) {
  const EquirectFrame frame(mean_latitude(districts));
  std::map<std::string, Point> centroids;
  for (const District& d : districts)
    centroids[d.district_id] = polygon_centroid(d.polygon);

  std::vector<FlowTree> trees;
  trees.reserve(spaces.size());
  for (const PublicSpace& s : spaces) {
    std::vector<FlowOrigin> origins;
    for (const auto& [key, value] : m.entries) {
      if (key.second != s.space_id || value <= 0.0) continue;
      auto c = centroids.find(key.first);
      if (c == centroids.end())
        throw load_error("flow matrix references unknown district: " + key.first);
      origins.push_back({key.first, c->second, value});
    }
    trees.push_back(build_flow_tree(s.space_id, polygon_centroid(s.polygon),
                                    std::move(origins), merge_angle_max_deg, frame));
  }
  return trees;
}

namespace {

struct LoadedInputs {
  std::vector<District> districts;
  std::vector<PublicSpace> spaces;
  std::vector<Zone> zones;
};

LoadedInputs preflight(const RunConfig& config) {
  for (const std::string& p :
       {config.records_path, config.districts_path, config.spaces_path}) {
    if (p.empty() || !fs::exists(p))
      throw load_error("geometry: load error: missing input file: " + p);
  }
  LoadedInputs in;
  try {
    in.districts = load_districts(config.districts_path);
    in.spaces = load_spaces(config.spaces_path);
    in.zones = zones_or_default(config, in.districts);
  } catch (const error& e) {
    throw load_error(std::string("geometry: load error: ") + e.what());
  }
  if (in.districts.empty())
    throw load_error("geometry: load error: empty district layer");
  return in;
}

nlohmann::ordered_json lisa_feature_collection(const std::vector<District>& districts,
                                               const MoranResult& r,
                                               std::span<const double> x,
                                               std::span<const double> y) {
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < districts.size(); ++i) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"district_id", districts[i].district_id},
                       {"name", districts[i].name},
                       {"x", x[i]},
                       {"y", y[i]},
                       {"zx", r.zx[i]},
                       {"lag_zy", r.lag[i]},
                       {"local_I", r.local_I[i]},
                       {"pseudo_p", r.pseudo_p[i]},
                       {"label", to_string(r.labels[i])}};
    f["geometry"] = geometry_to_geojson(districts[i].polygon);
    features.push_back(std::move(f));
  }
  fc["features"] = std::move(features);
  return fc;
}

// Stage cores over in-memory inputs. The stage_* wrappers and run_pipeline
// both call these, so standalone reruns reproduce pipeline outputs exactly.

std::vector<std::string> core_clean(const RunConfig& config,
                                    std::vector<TweetRecord> raw,
                                    std::vector<TweetRecord>* cleaned_out) {
  const CleanResult result = clean_records(std::move(raw), cleaning_config(config));
  fs::create_directories(config.out_dir);
  write_ndjson(paths::cleaned(config.out_dir), result.records);
  write_text_file(paths::bots(config.out_dir), bots_csv(result.bots));
  if (cleaned_out) *cleaned_out = result.records;
  return {paths::cleaned(config.out_dir), paths::bots(config.out_dir)};
}

std::vector<std::string> core_summarize(const RunConfig& config,
                                        const std::vector<TweetRecord>& raw,
                                        const std::vector<TweetRecord>& cleaned,
                                        const std::vector<Zone>& zones) {
  const auto rows = summarize(raw, cleaned, zones);
  write_text_file(paths::summary(config.out_dir), summary_csv(rows));
  return {paths::summary(config.out_dir)};
}

std::vector<std::string> core_homes(const RunConfig& config,
                                    const std::vector<TweetRecord>& cleaned,
                                    const std::vector<District>& districts,
                                    std::map<std::string, UserProfile>* profiles_out) {
  auto profiles = infer_homes(cleaned, districts, NightWindow{}, config.utc_offset_minutes);
  write_text_file(paths::homes(config.out_dir), homes_csv(profiles));
  if (profiles_out) *profiles_out = std::move(profiles);
  return {paths::homes(config.out_dir)};
}

std::vector<std::string> core_moran(const RunConfig& config,
                                    const std::vector<TweetRecord>& cleaned,
                                    const std::vector<District>& districts,
                                    const std::vector<PublicSpace>& spaces,
                                    const std::map<std::string, std::string>& homes) {
  const auto visits =
      detect_visits(cleaned, spaces, NightWindow{}, config.utc_offset_minutes);
  const auto visitors = visitors_by_home_district(visits, homes);

  std::vector<double> x(districts.size()), y(districts.size());
  for (std::size_t i = 0; i < districts.size(); ++i) {
    x[i] = static_cast<double>(districts[i].population);
    auto it = visitors.find(districts[i].district_id);
    y[i] = it == visitors.end() ? 0.0 : static_cast<double>(it->second);
  }
  if (config.swap_xy) std::swap(x, y);

  const WeightsMatrix w =
      build_weights(districts, config.scheme, true, config.snap_tolerance);
  const MoranResult r = bivariate_moran_analysis(x, y, w, config.permutations,
                                                 config.seed, config.alpha, config.tail);

  write_text_file(paths::moran(config.out_dir), moran_csv(r, w, x, y));
  write_text_file(paths::moran_global(config.out_dir), moran_global_text(r));
  write_text_file(paths::weights(config.out_dir), adjacency_text(w));
  write_json_file(paths::lisa_geojson(config.out_dir),
                  lisa_feature_collection(districts, r, x, y));
  return {paths::moran(config.out_dir), paths::moran_global(config.out_dir),
          paths::weights(config.out_dir), paths::lisa_geojson(config.out_dir)};
}

std::vector<std::string> core_flows(const RunConfig& config,
                                    const std::vector<TweetRecord>& cleaned,
                                    const std::vector<PublicSpace>& spaces,
                                    const std::map<std::string, UserProfile>& profiles) {
  const auto visits =
      detect_visits(cleaned, spaces, NightWindow{}, config.utc_offset_minutes);
  const auto homes = resolved_homes(profiles);
  const auto denominators = config.impact_denominator == "moved"
                                ? moved_user_counts(profiles)
                                : resolved_user_counts(profiles);
  const FlowMatrix raw = build_od(visits, homes, denominators);
  const FlowMatrix normalized = normalize_od(raw);

  std::vector<std::string> space_ids;
  space_ids.reserve(spaces.size());
  for (const PublicSpace& s : spaces) space_ids.push_back(s.space_id);

  write_text_file(paths::visits(config.out_dir), visits_csv(visits));
  write_text_file(paths::od_raw(config.out_dir), od_csv(raw, space_ids));
  write_text_file(paths::od_normalized(config.out_dir), od_csv(normalized, space_ids));
  write_text_file(paths::od_marginals(config.out_dir), od_marginals_csv(raw, space_ids));
  return {paths::visits(config.out_dir), paths::od_raw(config.out_dir),
          paths::od_normalized(config.out_dir), paths::od_marginals(config.out_dir)};
}

std::vector<std::string> core_flowmap(const RunConfig& config, const FlowMatrix& raw,
                                      const std::vector<District>& districts,
                                      const std::vector<PublicSpace>& spaces,
                                      std::vector<FlowTree>* raw_trees_out) {
  auto trees = build_trees(raw, districts, spaces, config.merge_angle_max_deg);
  std::vector<std::string> outputs;
  for (const FlowTree& tree : trees) {
    const std::string path =
        paths::join(config.out_dir, ("flow_" + tree.space_id + ".geojson").c_str());
    write_text_file(path, flow_tree_geojson(tree, config.width_scale_k));
    outputs.push_back(path);
  }
  if (raw_trees_out) *raw_trees_out = std::move(trees);
  return outputs;
}

std::vector<std::string> core_render(const RunConfig& config,
                                     const std::vector<District>& districts,
                                     const std::vector<PublicSpace>& spaces,
                                     const std::vector<FlowTree>& raw_trees,
                                     const std::vector<FlowTree>& impact_trees,
                                     const std::map<std::string, LisaLabel>* labels) {
  std::vector<std::string> outputs;
  const CanvasConfig canvas;

  std::map<std::string, SpaceCategory> category_of;
  for (const PublicSpace& s : spaces) category_of[s.space_id] = s.category;

  auto render_series = [&](const std::vector<FlowTree>& trees, double k,
                           const std::string& prefix) {
    std::map<std::string, std::vector<FlowTree>> by_category;
    for (const FlowTree& tree : trees) {
      if (tree.empty()) continue;
      by_category[to_string(category_of.at(tree.space_id))].push_back(tree);
    }
    for (const auto& [category, group] : by_category) {
      const Palette& palette = qualitative_palette(group.size());
      const std::string title = prefix + " flows: " + category;
      const std::string svg =
          render_flow_map(title, districts, group, k, palette, canvas);
      const std::string path = paths::join(
          config.out_dir, ("flows_" + prefix + "_" + category + ".svg").c_str());
      write_text_file(path, svg);
      outputs.push_back(path);
    }
  };
  render_series(raw_trees, config.width_scale_k, "raw");
  render_series(impact_trees, config.impact_width_scale_k, "impact");

  if (labels != nullptr) {
    const std::string lisa_path = paths::join(config.out_dir, "lisa.svg");
    write_text_file(lisa_path,
                    render_lisa_map("Cluster map", districts, *labels, canvas));
    outputs.push_back(lisa_path);
  }
  return outputs;
}

std::map<std::string, LisaLabel> labels_from_lisa_geojson(const std::string& path) {
  const nlohmann::json fc = load_json_file(path);
  std::map<std::string, LisaLabel> labels;
  static const std::map<std::string, LisaLabel> kByName = {
      {"HH", LisaLabel::HH},   {"LL", LisaLabel::LL},
      {"LH", LisaLabel::LH},   {"HL", LisaLabel::HL},
      {"NotSignificant", LisaLabel::NotSignificant},
      {"Island", LisaLabel::Island}};
  for (const auto& f : fc.at("features")) {
    const auto& props = f.at("properties");
    labels[props.at("district_id").get<std::string>()] =
        kByName.at(props.at("label").get<std::string>());
  }
  return labels;
}

}  // namespace

std::vector<std::string> stage_clean(const RunConfig& config) {
  std::vector<TweetRecord> raw = read_ndjson(config.records_path);
  return core_clean(config, std::move(raw), nullptr);
}

std::vector<std::string> stage_summarize(const RunConfig& config) {
  const auto districts = load_districts(config.districts_path);
  const auto zones = zones_or_default(config, districts);
  const auto raw = read_ndjson(config.records_path);
  const auto cleaned = read_ndjson(paths::cleaned(config.out_dir));
  return core_summarize(config, raw, cleaned, zones);
}

std::vector<std::string> stage_homes(const RunConfig& config) {
  const auto districts = load_districts(config.districts_path);
  const auto cleaned = read_ndjson(paths::cleaned(config.out_dir));
  return core_homes(config, cleaned, districts, nullptr);
}

std::vector<std::string> stage_moran(const RunConfig& config) {
  const auto districts = load_districts(config.districts_path);
  const auto spaces = load_spaces(config.spaces_path);
  const auto cleaned = read_ndjson(paths::cleaned(config.out_dir));
  const auto homes = read_homes_csv(paths::homes(config.out_dir));
  return core_moran(config, cleaned, districts, spaces, homes);
}

std::vector<std::string> stage_flows(const RunConfig& config) {
  const auto districts = load_districts(config.districts_path);
  const auto spaces = load_spaces(config.spaces_path);
  const auto cleaned = read_ndjson(paths::cleaned(config.out_dir));
  auto profiles = infer_homes(cleaned, districts, NightWindow{}, config.utc_offset_minutes);
  return core_flows(config, cleaned, spaces, profiles);
}

std::vector<std::string> stage_flowmap(const RunConfig& config) {
  if (!fs::exists(paths::od_raw(config.out_dir)))
    throw load_error("missing OD matrix: " + paths::od_raw(config.out_dir) +
                     " (run the flows stage first)");
  const auto districts = load_districts(config.districts_path);
  const auto spaces = load_spaces(config.spaces_path);
  const FlowMatrix raw = read_od_csv(paths::od_raw(config.out_dir), FlowKind::Raw);
  return core_flowmap(config, raw, districts, spaces, nullptr);
}

std::vector<std::string> stage_render(const RunConfig& config) {
  for (const char* needed : {"od_raw.csv", "od_normalized.csv"}) {
    if (!fs::exists(paths::join(config.out_dir, needed)))
      throw load_error(std::string("missing OD matrix: ") +
                       paths::join(config.out_dir, needed) + " (run the flows stage first)");
  }
  const auto districts = load_districts(config.districts_path);
  const auto spaces = load_spaces(config.spaces_path);
  const FlowMatrix raw = read_od_csv(paths::od_raw(config.out_dir), FlowKind::Raw);
  const FlowMatrix normalized =
      read_od_csv(paths::od_normalized(config.out_dir), FlowKind::Normalized);
  const auto raw_trees = build_trees(raw, districts, spaces, config.merge_angle_max_deg);
  const auto impact_trees =
      build_trees(normalized, districts, spaces, config.merge_angle_max_deg);
  const auto labels = labels_from_lisa_geojson(paths::lisa_geojson(config.out_dir));
  return core_render(config, districts, spaces, raw_trees, impact_trees, &labels);
}

std::vector<std::string> stage_map(const RunConfig& config) {
  if (!fs::exists(paths::od_raw(config.out_dir)))
    throw load_error("missing OD matrix: " + paths::od_raw(config.out_dir) +
                     " (run the flows stage first)");
  const auto districts = load_districts(config.districts_path);
  const auto spaces = load_spaces(config.spaces_path);
  const FlowMatrix raw = read_od_csv(paths::od_raw(config.out_dir), FlowKind::Raw);
  std::vector<FlowTree> raw_trees;
  auto outputs = core_flowmap(config, raw, districts, spaces, &raw_trees);

  std::vector<FlowTree> impact_trees;
  if (fs::exists(paths::od_normalized(config.out_dir))) {
    const FlowMatrix normalized =
        read_od_csv(paths::od_normalized(config.out_dir), FlowKind::Normalized);
    impact_trees = build_trees(normalized, districts, spaces, config.merge_angle_max_deg);
  }

  std::map<std::string, LisaLabel> labels;
  const bool have_labels = fs::exists(paths::lisa_geojson(config.out_dir));
  if (have_labels) labels = labels_from_lisa_geojson(paths::lisa_geojson(config.out_dir));
  const auto rendered = core_render(config, districts, spaces, raw_trees, impact_trees,
                                    have_labels ? &labels : nullptr);
  outputs.insert(outputs.end(), rendered.begin(), rendered.end());
  return outputs;
}

PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult result;
  for (const std::string& name : kStageNames) {
    StageStatus st;
    st.name = name;
    result.stages.push_back(std::move(st));
  }

  auto finish = [&](bool ok) {
    result.ok = ok;
    nlohmann::ordered_json manifest;
    manifest["tool"] = "tweetflow";
    manifest["config"] = config_json(config);
    manifest["seed"] = config.seed;
    manifest["ok"] = result.ok;
    manifest["failed_stage"] = result.failed_stage;
    manifest["error"] = result.error;
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (const StageStatus& st : result.stages) {
      nlohmann::ordered_json s;
      s["name"] = st.name;
      s["status"] = st.status;
      s["outputs"] = st.outputs;
      s["elapsed_ms"] = st.elapsed_ms;
      stages.push_back(std::move(s));
    }
    manifest["stages"] = std::move(stages);
    fs::create_directories(config.out_dir);
    result.manifest_path = paths::manifest(config.out_dir);
    write_json_file(result.manifest_path, manifest);
    return result;
  };

  LoadedInputs inputs;
  try {
    inputs = preflight(config);
  } catch (const std::exception& e) {
    result.failed_stage = "preflight";
    result.error = e.what();
    return finish(false);
  }

  std::vector<TweetRecord> raw;
  std::vector<TweetRecord> cleaned;
  std::map<std::string, UserProfile> profiles;
  FlowMatrix raw_matrix;
  std::vector<FlowTree> raw_trees;

  int stage_index = 0;
  auto run_stage = [&](const std::string& name, auto&& body) {
    StageStatus& st = result.stages[stage_index++];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      st.outputs = body();
    } catch (const std::exception& e) {
      st.status = "error: " + std::string(e.what());
      result.failed_stage = name;
      result.error = e.what();
      return false;
    }
    st.elapsed_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    st.status = "ok";
    return true;
  };

  if (!run_stage("clean", [&] {
        raw = read_ndjson(config.records_path);
        return core_clean(config, raw, &cleaned);
      }))
    return finish(false);

  if (!run_stage("summarize",
                 [&] { return core_summarize(config, raw, cleaned, inputs.zones); }))
    return finish(false);

  if (!run_stage("homes", [&] {
        return core_homes(config, cleaned, inputs.districts, &profiles);
      }))
    return finish(false);

  if (!run_stage("moran", [&] {
        return core_moran(config, cleaned, inputs.districts, inputs.spaces,
                          resolved_homes(profiles));
      }))
    return finish(false);

  if (!run_stage("flows", [&] {
        auto outputs = core_flows(config, cleaned, inputs.spaces, profiles);
        raw_matrix = read_od_csv(paths::od_raw(config.out_dir), FlowKind::Raw);
        return outputs;
      }))
    return finish(false);

  if (!run_stage("flowmap", [&] {
        return core_flowmap(config, raw_matrix, inputs.districts, inputs.spaces,
                            &raw_trees);
      }))
    return finish(false);

  if (!run_stage("render", [&] {
        const FlowMatrix normalized =
            read_od_csv(paths::od_normalized(config.out_dir), FlowKind::Normalized);
        const auto impact_trees = build_trees(normalized, inputs.districts,
                                              inputs.spaces, config.merge_angle_max_deg);
        const auto labels = labels_from_lisa_geojson(paths::lisa_geojson(config.out_dir));
        return core_render(config, inputs.districts, inputs.spaces, raw_trees,
                           impact_trees, &labels);
      }))
    return finish(false);

  return finish(true);
}

}  // namespace tweetflow
