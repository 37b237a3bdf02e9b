#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tweetflow/capture.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/pipeline.hpp"
#include "tweetflow/synth.hpp"
#include "tweetflow/timewin.hpp"

namespace {

// Exit codes: 0 ok, 1 usage, 2 capture, 9 input validation, 10..16 the
// pipeline stages in order.
constexpr int kExitUsage = 1;
constexpr int kExitCapture = 2;
constexpr int kExitPreflight = 9;

int stage_exit_code(const std::string& stage) {
  for (std::size_t i = 0; i < tweetflow::kStageNames.size(); ++i)
    if (tweetflow::kStageNames[i] == stage) return 10 + static_cast<int>(i);
  return kExitPreflight;
}

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

struct WindowFlags {
  std::string start;
  std::string end;
};

void apply_window(tweetflow::RunConfig& config, const WindowFlags& w) {
  auto parse = [](const std::string& text, const char* which) {
    std::string err;
    const auto parsed = tweetflow::parse_iso8601(text, &err);
    if (!parsed)
      throw tweetflow::config_error(std::string(which) + ": " + err + " ('" + text + "')");
    return *parsed;
  };
  if (!w.start.empty()) config.study_start = parse(w.start, "--study-start");
  if (!w.end.empty()) config.study_end = parse(w.end, "--study-end");
  if (config.study_start && config.study_end && *config.study_start >= *config.study_end)
    throw tweetflow::config_error("study window is empty (start >= end)");
}

int run_single_stage(const std::string& name,
                     const std::function<std::vector<std::string>()>& body) {
  try {
    const auto outputs = body();
    for (const std::string& path : outputs) std::cout << path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << name << ": " << e.what() << "\n";
    return stage_exit_code(name);
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tweetflow;

  CLI::App app{"tweetflow: mobility products from geolocated social-media points"};
  app.require_subcommand(1);

  RunConfig config;
  if (const char* env_out = std::getenv("TWEETFLOW_OUT_DIR")) config.out_dir = env_out;
  WindowFlags window;
  std::string scheme_name = "queen";
  std::string tail_name = "symmetric";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", config.out_dir, "Output directory");
    cmd->add_option("--utc-offset", config.utc_offset_minutes,
                    "Local time = UTC + offset minutes (default -180)");
  };

  // capture
  auto* capture_cmd = app.add_subcommand("capture", "Append an NDJSON stream to a file");
  CaptureConfig capture_config;
  std::vector<double> bbox_values;
  capture_cmd->add_option("--endpoint", capture_config.endpoint_url, "http://host:port/path")
      ->required();
  capture_cmd
      ->add_option("--bbox", bbox_values, "lonmin,latmin,lonmax,latmax (closed bounds)")
      ->delimiter(',')
      ->expected(4)
      ->required();
  capture_cmd->add_option("--out", capture_config.output_path, "Output NDJSON file")
      ->required();
  capture_cmd->add_option("--backoff-initial", capture_config.reconnect_backoff_initial_s,
                          "Initial reconnect delay, seconds");
  capture_cmd->add_option("--backoff-max", capture_config.reconnect_backoff_max_s,
                          "Reconnect delay cap, seconds");

  // clean
  auto* clean_cmd = app.add_subcommand("clean", "Parse, window-filter, dedup and bot-filter");
  clean_cmd->add_option("--in", config.records_path, "Raw NDJSON records")->required();
  clean_cmd->add_option("--study-start", window.start, "ISO-8601 window start (inclusive)");
  clean_cmd->add_option("--study-end", window.end, "ISO-8601 window end (exclusive)");
  clean_cmd->add_option("--bot-threshold", config.bot_threshold,
                        "Remove users with strictly more tweets (default 250)");
  clean_cmd->add_option("--bot-allow", config.bot_allow_path, "Allow-list file");
  clean_cmd->add_option("--bot-deny", config.bot_deny_path, "Deny-list file");
  add_common(clean_cmd);

  // summarize
  auto* summarize_cmd = app.add_subcommand("summarize",
      "Per-zone tweet and user counts (needs cleaned.ndjson from a prior clean)");
  summarize_cmd->add_option("--in", config.records_path, "Raw NDJSON records")->required();
  summarize_cmd->add_option("--districts", config.districts_path, "Districts GeoJSON")
      ->required();
  summarize_cmd->add_option("--zones", config.zones_path, "Zones GeoJSON (optional)");
  add_common(summarize_cmd);

  // homes
  auto* homes_cmd = app.add_subcommand("homes",
      "Infer home districts from night tweets (needs cleaned.ndjson)");
  homes_cmd->add_option("--districts", config.districts_path, "Districts GeoJSON")->required();
  add_common(homes_cmd);

  // moran
  auto* moran_cmd =
      app.add_subcommand(
      "moran", "Bivariate spatial autocorrelation (needs cleaned.ndjson and homes.csv)");
  moran_cmd->add_option("--districts", config.districts_path, "Districts GeoJSON")->required();
  moran_cmd->add_option("--spaces", config.spaces_path, "Public spaces GeoJSON")->required();
  moran_cmd->add_option("--permutations", config.permutations, "Permutations (default 999)");
  moran_cmd->add_option("--alpha", config.alpha, "Significance level (default 0.05)");
  moran_cmd->add_option("--seed", config.seed, "Permutation seed");
  moran_cmd->add_option("--scheme", scheme_name, "Contiguity: queen|rook (default queen)");
  moran_cmd->add_option("--snap", config.snap_tolerance,
                        "Vertex snap tolerance for contiguity (default exact)");
  moran_cmd->add_option("--tail", tail_name,
                        "Replicate counting: symmetric|directed (default symmetric)");
  moran_cmd->add_flag("--swap-xy", config.swap_xy, "Swap the two variables");
  add_common(moran_cmd);

  // flows
  auto* flows_cmd = app.add_subcommand("flows", "Visits and OD matrices (needs cleaned.ndjson)");
  flows_cmd->add_option("--districts", config.districts_path, "Districts GeoJSON")->required();
  flows_cmd->add_option("--spaces", config.spaces_path, "Public spaces GeoJSON")->required();
  flows_cmd->add_option("--impact-denominator", config.impact_denominator,
                        "Normalization denominator: all|moved (default all)");
  add_common(flows_cmd);

  // map
  auto* map_cmd = app.add_subcommand("map", "Flow trees and SVG maps (needs od_raw.csv from flows)");
  map_cmd->add_option("--districts", config.districts_path, "Districts GeoJSON")->required();
  map_cmd->add_option("--spaces", config.spaces_path, "Public spaces GeoJSON")->required();
  map_cmd->add_option("--merge-angle", config.merge_angle_max_deg,
                      "Merge cone half-angle, degrees (default 45)");
  map_cmd->add_option("--width-scale", config.width_scale_k,
                      "Stroke width per user (default 0.1)");
  map_cmd->add_option("--impact-width-scale", config.impact_width_scale_k,
                      "Stroke width per unit impact (default 40)");
  add_common(map_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic city corpus");
  std::string scenario_path;
  synth_cmd->add_option("--scenario", scenario_path, "Scenario key=value file")->required();
  add_common(synth_cmd);

  // run
  auto* run_cmd = app.add_subcommand("run", "Full pipeline: clean through render");
  run_cmd->add_option("--in", config.records_path, "Raw NDJSON records")->required();
  run_cmd->add_option("--districts", config.districts_path, "Districts GeoJSON")->required();
  run_cmd->add_option("--spaces", config.spaces_path, "Public spaces GeoJSON")->required();
  run_cmd->add_option("--zones", config.zones_path, "Zones GeoJSON (optional)");
  run_cmd->add_option("--study-start", window.start, "ISO-8601 window start (inclusive)");
  run_cmd->add_option("--study-end", window.end, "ISO-8601 window end (exclusive)");
  run_cmd->add_option("--bot-threshold", config.bot_threshold, "Bot threshold (default 250)");
  run_cmd->add_option("--bot-allow", config.bot_allow_path, "Allow-list file");
  run_cmd->add_option("--bot-deny", config.bot_deny_path, "Deny-list file");
  run_cmd->add_option("--permutations", config.permutations, "Permutations (default 999)");
  run_cmd->add_option("--alpha", config.alpha, "Significance level (default 0.05)");
  run_cmd->add_option("--seed", config.seed, "Seed");
  run_cmd->add_option("--scheme", scheme_name, "Contiguity: queen|rook");
  run_cmd->add_option("--snap", config.snap_tolerance, "Vertex snap tolerance");
  run_cmd->add_option("--tail", tail_name, "Replicate counting: symmetric|directed");
  run_cmd->add_flag("--swap-xy", config.swap_xy, "Swap Moran variables");
  run_cmd->add_option("--merge-angle", config.merge_angle_max_deg, "Merge cone, degrees");
  run_cmd->add_option("--width-scale", config.width_scale_k, "Raw stroke width scale");
  run_cmd->add_option("--impact-width-scale", config.impact_width_scale_k,
                      "Impact stroke width scale");
  run_cmd->add_option("--impact-denominator", config.impact_denominator, "all|moved");
  run_cmd->add_option("--threads", config.threads, "Reserved; stages run sequentially");
  add_common(run_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (scheme_name == "queen")
      config.scheme = ContiguityScheme::Queen;
    else if (scheme_name == "rook")
      config.scheme = ContiguityScheme::Rook;
    else
      throw config_error("unknown contiguity scheme: " + scheme_name);
    if (tail_name == "symmetric")
      config.tail = PermutationTail::Symmetric;
    else if (tail_name == "directed")
      config.tail = PermutationTail::Directed;
    else
      throw config_error("unknown tail rule: " + tail_name);
    if (config.impact_denominator != "all" && config.impact_denominator != "moved")
      throw config_error("--impact-denominator must be all or moved");
    if (config.threads < 1) throw config_error("--threads must be >= 1");
    apply_window(config, window);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (capture_cmd->parsed()) {
    capture_config.lon_min = bbox_values[0];
    capture_config.lat_min = bbox_values[1];
    capture_config.lon_max = bbox_values[2];
    capture_config.lat_max = bbox_values[3];
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    try {
      const CaptureReport report = stream_capture(capture_config, g_stop);
      std::cerr << "capture: " << report.lines_written << " lines written, "
                << report.reconnects << " reconnects, "
                << report.dropped_outside_bbox << " outside bbox, "
                << report.dropped_malformed << " malformed\n";
      if (report.gave_up) {
        std::cerr << "error: capture: endpoint unreachable after max backoff ("
                  << report.reconnects << " reconnect attempts)\n";
        return kExitCapture;
      }
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";  // capture errors carry their prefix
      return kExitCapture;
    }
  }

  if (clean_cmd->parsed()) return run_single_stage("clean", [&] { return stage_clean(config); });
  if (summarize_cmd->parsed()) {
    // summarize consumes the cleaned output of a prior clean run
    return run_single_stage("summarize", [&] { return stage_summarize(config); });
  }
  if (homes_cmd->parsed()) return run_single_stage("homes", [&] { return stage_homes(config); });
  if (moran_cmd->parsed()) return run_single_stage("moran", [&] { return stage_moran(config); });
  if (flows_cmd->parsed()) return run_single_stage("flows", [&] { return stage_flows(config); });
  if (map_cmd->parsed()) {
    return run_single_stage("flowmap", [&] { return stage_map(config); });
  }
  if (synth_cmd->parsed()) {
    try {
      const SynthScenario scenario = parse_scenario_file(scenario_path);
      const SynthData data = generate_synthetic(scenario);
      for (const std::string& path : write_synthetic(data, config.out_dir))
        std::cout << path << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: synth: " << e.what() << "\n";
      return 17;
    }
  }
  if (run_cmd->parsed()) {
    const PipelineResult result = run_pipeline(config);
    for (const StageStatus& st : result.stages)
      std::cerr << st.name << ": " << st.status << "\n";
    if (!result.ok) {
      std::cerr << "error: " << result.error << "\n";
      return result.failed_stage == "preflight" ? kExitPreflight
                                                : stage_exit_code(result.failed_stage);
    }
    std::cout << result.manifest_path << "\n";
    return 0;
  }

  std::cerr << app.help() << "\n";
  return kExitUsage;
}
