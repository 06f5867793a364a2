#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "csiaug/spectrogram.hpp"

namespace csiaug {

/// Portable spectrogram container ("CSIS", version 1), all little-endian:
///
///   offset  size  field
///        0     4  magic "CSIS"
///        4     2  version (u16) = 1
///        6     4  width w (u32)
///       10     4  height h (u32)
///       14     1  label (i8), -1 = unlabeled
///       15     7  reserved, zero
///       22  4*w*h payload, IEEE-754 binary32, time-major
inline constexpr std::size_t kSpectrogramHeaderSize = 22;
inline constexpr std::uint16_t kSpectrogramVersion = 1;

struct SpectrogramFile {
  Spectrogram spectrogram;
  std::int8_t label = -1;
};

/// Serializes to bytes. Values are narrowed to binary32; throws a format
/// error if any value is negative or non-finite.
std::vector<std::uint8_t> encode_spectrogram(const SpectrogramFile& file);

/// Parses bytes. `name` only appears in error messages.
SpectrogramFile decode_spectrogram(std::span<const std::uint8_t> bytes, const std::string& name = "<memory>");

void write_spectrogram(const std::filesystem::path& path, const SpectrogramFile& file);
SpectrogramFile read_spectrogram(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace csiaug
