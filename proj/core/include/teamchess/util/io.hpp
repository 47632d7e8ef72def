#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace teamchess {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames over `path`, so readers never
/// observe a truncated artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace teamchess
