#pragma once

#include <stdexcept>
#include <string>

namespace tweetflow {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input layers or files (missing property, invalid ring, duplicate id).
struct load_error : error {
  using error::error;
};

// Invalid configuration values (bad bbox, nonpositive scale, ...).
struct config_error : error {
  using error::error;
};

}  // namespace tweetflow
