#include "csiaug/spectrogram_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "csiaug/error.hpp"

namespace csiaug {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(u & 0xffu));
    u = static_cast<U>(u >> 8);
  }
}

template <typename U>
U get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  U u = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) u |= static_cast<U>(static_cast<U>(bytes[offset + i]) << (8 * i));
  return u;
}

}  // namespace

std::vector<std::uint8_t> encode_spectrogram(const SpectrogramFile& file) {
  const auto& s = file.spectrogram;
  std::vector<std::uint8_t> out{'C', 'S', 'I', 'S'};
  out.reserve(kSpectrogramHeaderSize + 4 * s.values().size());
  put_le<std::uint16_t>(out, kSpectrogramVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.width()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.height()));
  out.push_back(static_cast<std::uint8_t>(file.label));
  out.insert(out.end(), 7, 0);
  for (double v : s.values()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f) || f < 0.0f) {
      fail(ErrorKind::format, fmt::format("spectrogram value {} is not finite and non-negative", v));
    }
    put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

SpectrogramFile decode_spectrogram(std::span<const std::uint8_t> bytes, const std::string& name) {
  auto bad = [&](const std::string& why) { fail(ErrorKind::format, fmt::format("{}: {}", name, why)); };
  if (bytes.size() < kSpectrogramHeaderSize) bad("truncated header");
  if (std::memcmp(bytes.data(), "CSIS", 4) != 0) bad("bad magic");
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kSpectrogramVersion) bad(fmt::format("unsupported version {}", version));
  const std::size_t w = get_le<std::uint32_t>(bytes, 6);
  const std::size_t h = get_le<std::uint32_t>(bytes, 10);
  const auto label = static_cast<std::int8_t>(bytes[14]);
  const std::size_t payload = bytes.size() - kSpectrogramHeaderSize;
  const std::size_t expected = kSpectrogramHeaderSize + 4 * w * h;
  if ((w != 0 && h > payload / 4 / w) || bytes.size() != expected) {
    bad(fmt::format("size {} does not match {}x{} payload ({} bytes expected)", bytes.size(), w, h, expected));
  }
  std::vector<double> values(w * h);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto f = std::bit_cast<float>(get_le<std::uint32_t>(bytes, kSpectrogramHeaderSize + 4 * i));
    if (!std::isfinite(f) || f < 0.0f) bad(fmt::format("payload value {} at index {} is invalid", f, i));
    values[i] = f;
  }
  return {Spectrogram(w, h, std::move(values)), label};
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, fmt::format("write to {} failed", path.string()));
}

void write_spectrogram(const std::filesystem::path& path, const SpectrogramFile& file) {
  write_file_bytes(path, encode_spectrogram(file));
}

SpectrogramFile read_spectrogram(const std::filesystem::path& path) {
  return decode_spectrogram(read_file_bytes(path), path.string());
}

}  // namespace csiaug
