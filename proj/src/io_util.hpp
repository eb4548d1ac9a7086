#pragma once

#include <filesystem>
#include <string>

namespace fairgf {

/// Shortest round-trip decimal representation; keeps data files byte-stable
/// across runs while preserving full precision.
std::string format_double(double value);

/// strtod-based parse of a full token; throws parse_error on trailing junk.
double parse_double(const std::string& token, const std::string& context);

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace fairgf
