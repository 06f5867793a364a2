#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace csiaug {

/// "sha256:" followed by 64 lowercase hex digits.
std::string sha256_digest(std::span<const std::uint8_t> bytes);
std::string sha256_file_digest(const std::filesystem::path& path);

}  // namespace csiaug
