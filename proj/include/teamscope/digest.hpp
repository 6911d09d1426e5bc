#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace teamscope {

// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

// Hex SHA-256 of a file's contents. Throws IoError if unreadable.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace teamscope
