#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tweetflow {

// One geolocated message event. Times are stored in UTC only; local fields
// are derived on demand from the configured offset.
struct TweetRecord {
  std::string record_id;
  std::string user_id;
  std::int64_t timestamp_utc = 0;
  double lon = 0.0;
  double lat = 0.0;
  std::string text;
  std::string raw_line;  // original NDJSON bytes, kept for pass-through output
};

struct ParseError {
  std::string field;    // offending field, or "record" for whole-line problems
  std::string message;
};

// Parses one NDJSON line with fields id, user, created_at, lon, lat, text.
std::optional<TweetRecord> parse_record(std::string_view line, ParseError* err = nullptr);

struct NdjsonReadStats {
  std::int64_t lines_total = 0;
  std::int64_t lines_bad = 0;
};

// Reads every parseable record from an NDJSON file; bad lines are counted
// and skipped. Throws load_error when the file cannot be opened.
std::vector<TweetRecord> read_ndjson(const std::string& path, NdjsonReadStats* stats = nullptr);

void write_ndjson(const std::string& path, const std::vector<TweetRecord>& records);

}  // namespace tweetflow
