#include <cstring>
#include <limits>

#include <gtest/gtest.h>

#include "csiaug/error.hpp"
#include "csiaug/spectrogram_file.hpp"
#include "support.hpp"

using namespace csiaug;

namespace {

ErrorKind decode_error(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_spectrogram(bytes, "x.csis");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("x.csis"), std::string::npos);
    return e.kind();
  }
  ADD_FAILURE() << "decode accepted bad bytes";
  return ErrorKind::runtime;
}

}  // namespace

TEST(SpectrogramFile, HeaderLayoutIsBitExact) {
  Spectrogram x(2, 3, std::vector<double>{0, 1, 2, 3, 4, 0.5});
  const auto bytes = encode_spectrogram({x, 2});
  ASSERT_EQ(bytes.size(), 22u + 4 * 6);
  EXPECT_EQ(std::memcmp(bytes.data(), "CSIS", 4), 0);
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 2);
  EXPECT_EQ(bytes[10], 3);
  EXPECT_EQ(bytes[14], 2);
  for (int i = 15; i < 22; ++i) EXPECT_EQ(bytes[i], 0);
  // 0.5f = 0x3f000000, little-endian, last payload slot.
  EXPECT_EQ(bytes[22 + 20], 0x00);
  EXPECT_EQ(bytes[22 + 23], 0x3f);
}

TEST(SpectrogramFile, RoundTripThroughDisk) {
  csiaug::test::TempDir dir("file_roundtrip");
  auto x = csiaug::test::random_spectrogram(400, 52, 1);
  for (double& v : x.values()) v = static_cast<float>(v);  // payload is binary32
  write_spectrogram(dir / "a.csis", {x, -1});
  const auto back = read_spectrogram(dir / "a.csis");
  EXPECT_EQ(back.spectrogram, x);
  EXPECT_EQ(back.label, -1);
  EXPECT_EQ(std::filesystem::file_size(dir / "a.csis"), 22u + 4u * 400 * 52);
}

TEST(SpectrogramFile, CorruptInputsAreFormatErrors) {
  const auto good = encode_spectrogram({Spectrogram(4, 2, 1.0), 0});
  auto truncated = good;
  truncated.pop_back();
  EXPECT_EQ(decode_error(truncated), ErrorKind::format);
  EXPECT_EQ(decode_error({good.begin(), good.begin() + 10}), ErrorKind::format);
  auto magic = good;
  magic[0] = 'X';
  EXPECT_EQ(decode_error(magic), ErrorKind::format);
  auto version = good;
  version[4] = 2;
  EXPECT_EQ(decode_error(version), ErrorKind::format);
  auto huge = good;
  huge[9] = 0xff;
  huge[13] = 0xff;
  EXPECT_EQ(decode_error(huge), ErrorKind::format);
  auto negative = good;
  negative[22 + 3] = 0xbf;  // -1.0f
  EXPECT_EQ(decode_error(negative), ErrorKind::format);
}

TEST(SpectrogramFile, RefusesToEncodeInvalidValues) {
  Spectrogram x(1, 1, -1.0);
  EXPECT_THROW(encode_spectrogram({x, 0}), Error);
  Spectrogram y(1, 1, std::numeric_limits<double>::infinity());
  EXPECT_THROW(encode_spectrogram({y, 0}), Error);
}

TEST(SpectrogramFile, MissingFileIsIoError) {
  try {
    read_spectrogram("/nonexistent/zzz.csis");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}
