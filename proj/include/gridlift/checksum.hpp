#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gridlift {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Digest of a file's contents. Throws FileNotFound / IoError.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace gridlift
