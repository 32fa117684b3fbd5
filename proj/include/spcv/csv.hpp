#pragma once

#include <string>
#include <vector>

namespace spcv {

// Shortest representation that round-trips a double exactly.
std::string fmt_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

// Quote a value for embedding in a csv row when it contains separators.
std::string csv_field(const std::string& value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace spcv
