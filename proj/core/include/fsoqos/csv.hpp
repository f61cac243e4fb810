#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fsoqos::csv {

/// Splits one comma-separated line; no quoting support (fields never contain commas).
std::vector<std::string> split_line(std::string_view line);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict parse of a whole field as a double; returns false on any trailing text.
bool parse_double(std::string_view text, double& out);

/// getline that also strips a trailing '\r'.
bool read_line(std::istream& in, std::string& line);

}  // namespace fsoqos::csv
