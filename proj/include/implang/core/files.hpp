#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace implang {

/// Writes to a sibling temp file then renames over `path`, so readers never
/// observe a partially written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Throws std::runtime_error if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace implang
