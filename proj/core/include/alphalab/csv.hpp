#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace alphalab::csv {

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Whole-field numeric parse; returns false on trailing garbage or empty input.
bool parse_double(std::string_view field, double& out);
bool parse_int64(std::string_view field, long long& out);

// Shortest-ish stable text for a double: "%.10g". Used by every CSV writer so
// that reruns produce byte-identical files.
std::string format(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace alphalab::csv
