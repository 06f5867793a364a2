#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "csiaug/spectrogram.hpp"

namespace csiaug {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t x, std::size_t y) const noexcept { return pixels[y * width + x]; }
};

/// Min-max scaled image with time on x and subcarrier on y (subcarrier 0 at
/// the top). A constant spectrogram renders as mid-gray 128.
GrayImage render(const Spectrogram& x);

/// Two renders next to each other with a 2-pixel white gutter. Heights must
/// match.
GrayImage side_by_side(const GrayImage& left, const GrayImage& right);

void write_png(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_png(const std::filesystem::path& path);

}  // namespace csiaug
