#include "csiaug/preview.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include <fmt/format.h>
#include <png.h>

#include "csiaug/error.hpp"

namespace csiaug {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) fail(ErrorKind::io, fmt::format("cannot open {}", path.string()));
  return f;
}

}  // namespace

GrayImage render(const Spectrogram& x) {
  GrayImage img{x.width(), x.height(), std::vector<std::uint8_t>(x.width() * x.height(), 128)};
  if (x.empty()) return img;
  const auto [lo_it, hi_it] = std::minmax_element(x.values().begin(), x.values().end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return img;
  for (std::size_t t = 0; t < x.width(); ++t) {
    for (std::size_t k = 0; k < x.height(); ++k) {
      const double v = 255.0 * (x.at(t, k) - lo) / (hi - lo);
      img.pixels[k * img.width + t] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
  return img;
}

GrayImage side_by_side(const GrayImage& left, const GrayImage& right) {
  if (left.height != right.height) fail(ErrorKind::parameter, "side_by_side: image heights differ");
  constexpr std::size_t gutter = 2;
  GrayImage out{left.width + gutter + right.width, left.height, {}};
  out.pixels.assign(out.width * out.height, 255);
  for (std::size_t y = 0; y < out.height; ++y) {
    std::copy_n(left.pixels.begin() + y * left.width, left.width, out.pixels.begin() + y * out.width);
    std::copy_n(right.pixels.begin() + y * right.width, right.width,
                out.pixels.begin() + y * out.width + left.width + gutter);
  }
  return out;
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
  if (image.width == 0 || image.height == 0) fail(ErrorKind::parameter, "write_png: empty image");
  auto f = open(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorKind::io, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::io, fmt::format("failed writing {}", path.string()));
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < image.height; ++y) {
    png_write_row(png, image.pixels.data() + y * image.width);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage read_png(const std::filesystem::path& path) {
  auto f = open(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(ErrorKind::io, "libpng initialisation failed");
  }
  GrayImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::format, fmt::format("{} is not a readable PNG", path.string()));
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::format, fmt::format("{} is not an 8-bit grayscale PNG", path.string()));
  }
  img.width = png_get_image_width(png, info);
  img.height = png_get_image_height(png, info);
  img.pixels.resize(img.width * img.height);
  for (std::size_t y = 0; y < img.height; ++y) png_read_row(png, img.pixels.data() + y * img.width, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace csiaug
