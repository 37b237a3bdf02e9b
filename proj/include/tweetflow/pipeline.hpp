#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tweetflow/clean.hpp"
#include "tweetflow/flowtree.hpp"
#include "tweetflow/home.hpp"
#include "tweetflow/moran.hpp"
#include "tweetflow/od.hpp"
#include "tweetflow/weights.hpp"

namespace tweetflow {

struct RunConfig {
  std::string records_path;
  std::string districts_path;
  std::string spaces_path;
  std::string zones_path;            // optional; default = one zone over the layer bbox
  std::string out_dir = "out";
  std::optional<std::int64_t> study_start;
  std::optional<std::int64_t> study_end;
  int utc_offset_minutes = -180;
  std::int64_t bot_threshold = 250;
  std::string bot_allow_path;        // optional, one user_id per line
  std::string bot_deny_path;
  ContiguityScheme scheme = ContiguityScheme::Queen;
  double snap_tolerance = 0.0;
  int permutations = 999;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  PermutationTail tail = PermutationTail::Symmetric;
  bool swap_xy = false;              // swap the population/visitors roles
  double merge_angle_max_deg = 45.0;
  double width_scale_k = 0.1;        // raw flow map series
  double impact_width_scale_k = 40.0;  // normalized flow map series
  std::string impact_denominator = "all";  // "all" or "moved" resolved users
  int threads = 1;
};

nlohmann::ordered_json config_json(const RunConfig& config);

// Stage names in pipeline order.
extern const std::vector<std::string> kStageNames;  // clean..render, 7 stages

struct StageStatus {
  std::string name;
  std::string status = "skipped";  // ok | error: <msg> | skipped
  std::vector<std::string> outputs;
  double elapsed_ms = 0.0;
};

struct PipelineResult {
  bool ok = false;
  std::string failed_stage;  // empty when ok
  std::string error;
  std::vector<StageStatus> stages;
  std::string manifest_path;
};

// Runs clean -> summarize -> homes -> moran -> flows -> flowmap -> render,
// persisting every stage output under config.out_dir and writing
// manifest.json (also on failure, with the failing stage marked).
PipelineResult run_pipeline(const RunConfig& config);

// Individual stage runners operating on persisted files; each rereads its
// inputs so a stage can be rerun standalone with identical results.
std::vector<std::string> stage_clean(const RunConfig& config);
std::vector<std::string> stage_summarize(const RunConfig& config);
std::vector<std::string> stage_homes(const RunConfig& config);
std::vector<std::string> stage_moran(const RunConfig& config);
std::vector<std::string> stage_flows(const RunConfig& config);
std::vector<std::string> stage_flowmap(const RunConfig& config);
std::vector<std::string> stage_render(const RunConfig& config);

// The `map` subcommand: flow trees plus SVG maps from persisted OD matrices;
// the cluster map is included only when the moran stage already ran.
std::vector<std::string> stage_map(const RunConfig& config);

// Helpers shared by stages and the CLI.
CleaningConfig cleaning_config(const RunConfig& config);
std::vector<Zone> zones_or_default(const RunConfig& config, const std::vector<District>& districts);
std::map<std::string, std::string> read_homes_csv(const std::string& path);
FlowMatrix read_od_csv(const std::string& path, FlowKind kind);
std::vector<FlowTree> build_trees(const FlowMatrix& m, const std::vector<District>& districts,
                                  const std::vector<PublicSpace>& spaces,
                                  double merge_angle_max_deg);

}  // namespace tweetflow
