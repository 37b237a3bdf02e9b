#include "tweetflow/capture.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "tweetflow/errors.hpp"

namespace tweetflow {

void validate(const CaptureConfig& config) {
  if (!(config.lon_min < config.lon_max))
    throw config_error("capture: lon_min must be < lon_max");
  if (!(config.lat_min < config.lat_max))
    throw config_error("capture: lat_min must be < lat_max");
  if (config.lon_min < -180.0 || config.lon_max > 180.0 || config.lat_min < -90.0 ||
      config.lat_max > 90.0)
    throw config_error("capture: bbox outside world bounds");
  if (config.reconnect_backoff_initial_s <= 0.0 ||
      config.reconnect_backoff_initial_s > config.reconnect_backoff_max_s)
    throw config_error("capture: backoff range invalid (need 0 < initial <= max)");
  if (config.output_path.empty()) throw config_error("capture: output path required");
}

double backoff_delay_s(const CaptureConfig& config, int attempt) {
  double d = config.reconnect_backoff_initial_s * std::ldexp(1.0, attempt);
  if (!(d < config.reconnect_backoff_max_s)) d = config.reconnect_backoff_max_s;
  return d;
}

LineVerdict classify_line(const CaptureConfig& config, const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return LineVerdict::Malformed;
  const auto lon = j.find("lon");
  const auto lat = j.find("lat");
  if (lon == j.end() || lat == j.end() || !lon->is_number() || !lat->is_number())
    return LineVerdict::Malformed;
  return config.bbox_contains(lon->get<double>(), lat->get<double>())
             ? LineVerdict::Keep
             : LineVerdict::OutsideBbox;
}

namespace {

struct UrlParts {
  std::string base;  // http://host:port
  std::string path;
};

UrlParts split_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0)
    throw config_error("capture: only http:// endpoints are supported: " + url);
  const auto slash = url.find('/', scheme.size());
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

CaptureReport stream_capture(const CaptureConfig& config, std::atomic<bool>& stop) {
  validate(config);
  const UrlParts url = split_url(config.endpoint_url);

  std::ofstream out(config.output_path, std::ios::binary | std::ios::app);
  if (!out) throw config_error("capture: output path not writable: " + config.output_path);

  CaptureReport report;
  std::string buffer;

  auto consume = [&](const char* data, std::size_t len) {
    buffer.append(data, len);
    std::size_t start = 0;
    for (;;) {
      const std::size_t nl = buffer.find('\n', start);
      if (nl == std::string::npos) break;
      std::string line = buffer.substr(start, nl - start);
      start = nl + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      switch (classify_line(config, line)) {
        case LineVerdict::Keep:
          out << line << '\n';
          ++report.lines_written;
          break;
        case LineVerdict::OutsideBbox:
          ++report.dropped_outside_bbox;
          break;
        case LineVerdict::Malformed:
          ++report.dropped_malformed;
          break;
      }
    }
    buffer.erase(0, start);
  };

  int consecutive_failures = 0;
  while (!stop.load()) {
    httplib::Client client(url.base);
    client.set_read_timeout(2, 0);
    client.set_connection_timeout(2, 0);

    bool received_anything = false;
    auto res = client.Get(url.path, [&](const char* data, std::size_t len) {
      received_anything = true;
      consume(data, len);
      return !stop.load();
    });

    // an incomplete trailing line is dropped, never written
    if (!buffer.empty()) {
      ++report.dropped_malformed;
      buffer.clear();
    }
    out.flush();

    if (stop.load()) break;  // stream ended because we were told to stop

    // The stream ended on its own; every retry from here is a reconnect.
    ++report.reconnects;
    if (res || received_anything) {
      consecutive_failures = 0;
    } else {
      ++consecutive_failures;
      // Fatal once a full wait at the backoff cap still did not connect.
      if (consecutive_failures >= 2 &&
          backoff_delay_s(config, consecutive_failures - 2) >=
              config.reconnect_backoff_max_s) {
        report.gave_up = true;
        break;
      }
    }

    const double delay = backoff_delay_s(config, std::max(0, consecutive_failures - 1));
    // sleep in small slices so the stop flag stays responsive
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(delay);
    while (!stop.load() && std::chrono::steady_clock::now() < deadline)
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return report;
}

}  // namespace tweetflow
