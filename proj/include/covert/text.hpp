// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace covert::text {

/// Splits on runs of spaces/tabs. Empty input gives an empty vector.
std::vector<std::string> split_whitespace(std::string_view line);

std::string_view trim(std::string_view s);

/// Shortest decimal form that round-trips ("%.17g" fallback), so files are
/// byte-stable across runs. Infinities print as "inf" / "-inf".
std::string format_double(double value);

/// Strict parsers; throw std::invalid_argument naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);

/// Throws std::invalid_argument unless `label` can be written as a single
/// token in our line-based files: non-empty, no whitespace or commas, and not
/// starting with '#'.
void check_label(std::string_view label);

/// Reads every line of a file (without terminators). Throws IoError.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes `content` atomically enough for our purposes (truncate + write).
/// Throws IoError with the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace covert::text
