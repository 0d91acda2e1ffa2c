#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qssp {

/// Whole-file read; throws qssp::IoError naming the path.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

namespace text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> lines(std::string_view s);

/// Strict numeric parsers: the whole (trimmed) field must be consumed.
/// Throw qssp::ParseError tagged with the given line/column.
double parse_double(std::string_view field, int line = 0, int column = 0);
long long parse_int(std::string_view field, int line = 0, int column = 0);

/// Shortest decimal rendering that round-trips a double.
std::string format_double(double v);

}  // namespace text
}  // namespace qssp
