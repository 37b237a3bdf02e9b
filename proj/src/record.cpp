#include "tweetflow/record.hpp"

#include <fstream>

#include "json.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/timewin.hpp"

namespace tweetflow {

namespace {

bool get_id_field(const nlohmann::json& j, const char* key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end()) return false;
  if (it->is_string()) {
    out = it->get<std::string>();
    return !out.empty();
  }
  if (it->is_number_integer()) {
    out = std::to_string(it->get<std::int64_t>());
    return true;
  }
  return false;
}

}  // namespace

std::optional<TweetRecord> parse_record(std::string_view line, ParseError* err) {
  auto fail = [&](const char* field, std::string message) -> std::optional<TweetRecord> {
    if (err) *err = {field, std::move(message)};
    return std::nullopt;
  };

  std::string_view trimmed = line;
  while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r'))
    trimmed.remove_suffix(1);
  if (trimmed.empty()) return fail("record", "empty record");

  const nlohmann::json j = nlohmann::json::parse(trimmed, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return fail("record", "not a JSON object");

  TweetRecord rec;
  rec.raw_line.assign(trimmed.data(), trimmed.size());

  if (!get_id_field(j, "id", rec.record_id)) return fail("id", "missing or invalid");
  if (!get_id_field(j, "user", rec.user_id)) return fail("user", "missing or invalid");

  auto ts = j.find("created_at");
  if (ts == j.end() || !ts->is_string()) return fail("created_at", "missing or not a string");
  std::string ts_err;
  const auto epoch = parse_iso8601(ts->get<std::string>(), &ts_err);
  if (!epoch) return fail("created_at", ts_err);
  rec.timestamp_utc = *epoch;

  auto lon = j.find("lon");
  if (lon == j.end() || !lon->is_number()) return fail("lon", "missing or not a number");
  rec.lon = lon->get<double>();
  if (!(rec.lon >= -180.0 && rec.lon <= 180.0)) return fail("lon", "out of range [-180,180]");

  auto lat = j.find("lat");
  if (lat == j.end() || !lat->is_number()) return fail("lat", "missing or not a number");
  rec.lat = lat->get<double>();
  if (!(rec.lat >= -90.0 && rec.lat <= 90.0)) return fail("lat", "out of range [-90,90]");

  auto text = j.find("text");
  if (text == j.end() || !text->is_string()) return fail("text", "missing or not a string");
  rec.text = text->get<std::string>();

  return rec;
}

std::vector<TweetRecord> read_ndjson(const std::string& path, NdjsonReadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw load_error("cannot open NDJSON file: " + path);
  std::vector<TweetRecord> records;
  std::string line;
  NdjsonReadStats local{};
  while (std::getline(in, line)) {
    ++local.lines_total;
    auto rec = parse_record(line);
    if (rec) {
      records.push_back(std::move(*rec));
    } else {
      ++local.lines_bad;
    }
  }
  if (stats) *stats = local;
  return records;
}

void write_ndjson(const std::string& path, const std::vector<TweetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw load_error("cannot open output file: " + path);
  for (const TweetRecord& rec : records) out << rec.raw_line << '\n';
}

}  // namespace tweetflow
