#include <gtest/gtest.h>

#include "csiaug/error.hpp"
#include "csiaug/preview.hpp"
#include "support.hpp"

using namespace csiaug;

TEST(Preview, MinMapsToBlackMaxToWhite) {
  Spectrogram x(3, 2, std::vector<double>{1, 2, 3, 4, 5, 9});
  const auto img = render(x);
  EXPECT_EQ(img.width, 3u);
  EXPECT_EQ(img.height, 2u);
  EXPECT_EQ(img.at(0, 0), 0);    // value 1 at t=0, k=0
  EXPECT_EQ(img.at(2, 1), 255);  // value 9 at t=2, k=1
  EXPECT_EQ(img.at(1, 0), 64);   // value 3 -> 255 * 2 / 8 = 63.75
}

TEST(Preview, ConstantIsMidGray) {
  const auto img = render(Spectrogram(5, 4, 7.0));
  for (auto p : img.pixels) EXPECT_EQ(p, 128);
}

TEST(Preview, PngRoundTripAndDimensions) {
  csiaug::test::TempDir dir("preview");
  const auto x = csiaug::test::random_spectrogram(400, 52, 3);
  const auto img = render(x);
  write_png(dir / "a.png", img);
  const auto back = read_png(dir / "a.png");
  EXPECT_EQ(back.width, 400u);
  EXPECT_EQ(back.height, 52u);
  EXPECT_EQ(back.pixels, img.pixels);
  const auto pair = side_by_side(img, img);
  EXPECT_EQ(pair.width, 802u);
  EXPECT_EQ(pair.at(400, 0), 255);
}

TEST(Preview, UnwritablePathIsIoError) {
  try {
    write_png("/nonexistent/dir/a.png", render(Spectrogram(2, 2, 1.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}
