#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace tweetflow {

struct CaptureConfig {
  std::string endpoint_url;  // http://host:port/path
  double lon_min = 0.0, lat_min = 0.0, lon_max = 0.0, lat_max = 0.0;
  std::string output_path;
  double reconnect_backoff_initial_s = 1.0;
  double reconnect_backoff_max_s = 60.0;

  // Closed test: boundary points are captured.
  bool bbox_contains(double lon, double lat) const {
    return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
  }
};

// Throws config_error on bad bbox, world-bounds violations or a backoff
// range with initial > max.
void validate(const CaptureConfig& config);

// delay before reconnect attempt k (0-based): min(initial * 2^k, max).
double backoff_delay_s(const CaptureConfig& config, int attempt);

struct CaptureReport {
  std::int64_t lines_written = 0;
  std::int64_t reconnects = 0;
  std::int64_t dropped_outside_bbox = 0;
  std::int64_t dropped_malformed = 0;
  bool gave_up = false;  // endpoint unreachable after max backoff
};

// Appends in-bbox NDJSON lines from a long-lived HTTP stream to the output
// file, byte for byte. Lines outside the bbox or unparseable are counted and
// dropped. Reconnects with exponential backoff until the stop flag is set;
// gives up only after a failed attempt at the backoff cap.
CaptureReport stream_capture(const CaptureConfig& config, std::atomic<bool>& stop);

// Filter for one line (no trailing newline). Used by stream_capture and
// directly testable.
enum class LineVerdict { Keep, OutsideBbox, Malformed };
LineVerdict classify_line(const CaptureConfig& config, const std::string& line);

}  // namespace tweetflow
