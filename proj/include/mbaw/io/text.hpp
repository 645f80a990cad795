#pragma once

// Small text helpers shared by the file readers and writers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mbaw::io {

/// "%.17g": shortest form that still round-trips every double.
std::string format_number(double value);

/// "%.16e": fixed 17 significant digits, lowercase exponent.
std::string format_scientific(double value);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string_view> lines(std::string_view text);

/// Strict decimal parse of the whole token; throws Error{parse}.
double parse_number(std::string_view token, std::string_view what, std::size_t line = 0);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mbaw::io
