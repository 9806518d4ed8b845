#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gaborface/errors.hpp"
#include "gaborface/image.hpp"

using gaborface::ImageRaster;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(ImageRaster, RejectsBadShape) {
  EXPECT_THROW(ImageRaster(0, 3, 0.0), gaborface::ValidationError);
  EXPECT_THROW(ImageRaster(2, 2, std::vector<double>(3, 0.0)), gaborface::ValidationError);
  EXPECT_THROW(ImageRaster(1, 1, std::vector<double>{std::nan("")}), gaborface::ValidationError);
}

TEST(ImageRaster, ReflectIndexIsHalfSampleMirror) {
  // size 4: ... 1 0 | 0 1 2 3 | 3 2 1 0 | 0 1 ...
  const int expected[] = {1, 0, 0, 1, 2, 3, 3, 2, 1, 0, 0, 1};
  for (int i = -2; i < 10; ++i) EXPECT_EQ(ImageRaster::reflect_index(i, 4), expected[i + 2]) << i;
  EXPECT_EQ(ImageRaster::reflect_index(-7, 1), 0);
}

TEST(ImageRaster, ContainsIsHalfOpen) {
  ImageRaster img(4, 3, 1.0);
  EXPECT_TRUE(img.contains({0, 0}));
  EXPECT_TRUE(img.contains({3.999, 2.5}));
  EXPECT_FALSE(img.contains({4.0, 1}));
  EXPECT_FALSE(img.contains({1, -0.01}));
}

TEST(Pgm, ParsesHeaderWithComments) {
  const std::string data = "P5\n# made by hand\n3 2\n# depth\n255\n";
  std::string raster = {char(0), char(10), char(20), char(30), char(40), char(255)};
  auto img = gaborface::parse_pgm(bytes_of(data + raster));
  ASSERT_EQ(img.width(), 3);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(img.at(1, 0), 10.0);
  EXPECT_EQ(img.at(2, 1), 255.0);
}

TEST(Pgm, RoundTrip) {
  ImageRaster img(5, 4, std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 250});
  auto back = gaborface::parse_pgm(bytes_of(gaborface::encode_pgm(img)));
  EXPECT_EQ(std::vector<double>(back.intensities().begin(), back.intensities().end()),
            std::vector<double>(img.intensities().begin(), img.intensities().end()));
}

TEST(Pgm, RejectsMalformed) {
  EXPECT_THROW(gaborface::parse_pgm(bytes_of("P2\n1 1\n255\n0")), gaborface::FormatError);
  EXPECT_THROW(gaborface::parse_pgm(bytes_of("P5\n2 2\n65535\n")), gaborface::FormatError);
  EXPECT_THROW(gaborface::parse_pgm(bytes_of("P5\n2 2\n255\nab")), gaborface::FormatError);
  EXPECT_THROW(gaborface::parse_pgm(bytes_of("P5\n2")), gaborface::FormatError);
  EXPECT_THROW(gaborface::parse_pgm(bytes_of("P5\nx 2\n255\n")), gaborface::FormatError);
  EXPECT_THROW(gaborface::read_pgm("/nonexistent/file.pgm"), gaborface::FormatError);
}

TEST(Resample, IdentityAndConstant) {
  ImageRaster img(3, 2, std::vector<double>{1, 2, 3, 4, 5, 6});
  auto same = gaborface::resample_bilinear(img, 3, 2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) EXPECT_DOUBLE_EQ(same.at(x, y), img.at(x, y));
  auto c = gaborface::resample_bilinear(ImageRaster(7, 5, 42.0), 13, 3);
  for (double v : c.intensities()) EXPECT_DOUBLE_EQ(v, 42.0);
}

TEST(Resample, UpsampleInterpolatesLinearRamp) {
  ImageRaster ramp(4, 1, std::vector<double>{0, 10, 20, 30});
  auto up = gaborface::resample_bilinear(ramp, 8, 1);
  // target i samples source x = i / 2
  EXPECT_DOUBLE_EQ(up.at(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(up.at(4, 0), 20.0);
  EXPECT_DOUBLE_EQ(up.at(5, 0), 25.0);
}

TEST(ImageRaster, ScaledMultipliesEveryPixel) {
  ImageRaster img(2, 1, std::vector<double>{3, 4});
  auto s = img.scaled(2.5);
  EXPECT_DOUBLE_EQ(s.at(0, 0), 7.5);
  EXPECT_DOUBLE_EQ(s.at(1, 0), 10.0);
}
