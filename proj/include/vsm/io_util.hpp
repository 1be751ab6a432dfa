#pragma once

#include <filesystem>
#include <string>

namespace vsm {

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temp file and renames, so a failed run never leaves a
// partial artifact at `path`.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// Fixed-point formatting with a '.' decimal separator regardless of locale.
std::string format_fixed(double value, int decimals);

} // namespace vsm
