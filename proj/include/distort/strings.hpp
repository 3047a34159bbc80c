#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace distort {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split(std::string_view s, char delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t utf8_length(std::string_view s);
// Reads a whole file; throws kIo on failure.
std::string read_file(const std::string& path);

}  // namespace distort
