#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tweetflow {

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> csv_split(std::string_view line);

// Reads a CSV file into rows of fields; the first row is returned too.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace tweetflow
