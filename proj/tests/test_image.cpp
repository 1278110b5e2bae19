#include <gtest/gtest.h>

#include <cmath>

#include "retinoblob/image.hpp"

using namespace retinoblob;

TEST(Raster, RejectsEmptyDimensions) {
  EXPECT_THROW(GrayImage(0, 3), DataError);
  EXPECT_THROW(GrayImage(3, 0), DataError);
  EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>(3)), DataError);
}

TEST(Raster, RowMajorAccess) {
  GrayImage img(3, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  EXPECT_EQ(img(0, 1), 4);
  EXPECT_EQ(img(2, 0), 3);
  EXPECT_EQ((img[Point{1, 1}]), 5);
  EXPECT_EQ(img.row(1)[2], 6);
}

TEST(Resize, IdentityWhenDimensionsMatch) {
  ColorImage img(5, 4);
  for (std::size_t i = 0; i < img.pixels().size(); ++i)
    img.pixels()[i] = {static_cast<std::uint8_t>(i * 7), static_cast<std::uint8_t>(i * 3), static_cast<std::uint8_t>(i)};
  EXPECT_EQ(resize_to_standard(img, 5, 4), img);
}

TEST(Resize, ConstantStaysConstant) {
  ColorImage img(2, 2, Rgb{90, 90, 90});
  const auto out = resize_to_standard(img, 4, 4);
  ASSERT_EQ(out.size(), (Size{4, 4}));
  for (const auto& p : out.pixels()) EXPECT_EQ(p, (Rgb{90, 90, 90}));
}

TEST(Resize, MiddleOfTwoPixelRampIsHalfway) {
  ColorImage img(2, 1, std::vector<Rgb>{{0, 0, 0}, {255, 255, 255}});
  const auto out = resize_to_standard(img, 3, 1);
  // centre of the middle output pixel maps to source x = 0.5: equal weights
  for (std::uint8_t c : {out(1, 0).r, out(1, 0).g, out(1, 0).b}) EXPECT_NEAR(c, 128, 1);
  EXPECT_EQ(out(0, 0), (Rgb{0, 0, 0}));
  EXPECT_EQ(out(2, 0), (Rgb{255, 255, 255}));
}

TEST(Resize, DefaultsToStandardSize) {
  const auto out = resize_to_standard(ColorImage(10, 10, Rgb{1, 2, 3}));
  EXPECT_EQ(out.size(), kStandardSize);
  EXPECT_THROW((void)resize_to_standard(ColorImage(4, 4), 0, 5), DataError);
}

TEST(Luma, Fixtures) {
  EXPECT_EQ(luma({255, 255, 255}), 255);
  EXPECT_EQ(luma({0, 0, 0}), 0);
  EXPECT_EQ(luma({255, 0, 0}), static_cast<int>(std::lround(0.299 * 255)));
  EXPECT_EQ(luma({255, 0, 0}), 76);
}

TEST(Hue, Fixtures) {
  EXPECT_DOUBLE_EQ(*hue_of({255, 0, 0}), 0.0);
  EXPECT_NEAR(*hue_of({0, 255, 0}), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(*hue_of({0, 0, 255}), 2.0 / 3.0, 1e-12);
  // ((g-b)/delta mod 6)/6 = (128/255)/6
  EXPECT_NEAR(*hue_of({255, 128, 0}), 0.0837, 0.001);
  EXPECT_FALSE(hue_of({40, 40, 40}).has_value());
  const double magenta = *hue_of({255, 0, 254});
  EXPECT_GE(magenta, 0.0);
  EXPECT_LT(magenta, 1.0);
}

TEST(MaskConversion, RoundTrip) {
  BinaryMask m(2, 1, std::vector<std::uint8_t>{1, 0});
  const auto g = mask_to_gray(m);
  EXPECT_EQ(g(0, 0), 255);
  EXPECT_EQ(g(1, 0), 0);
  EXPECT_EQ(gray_to_mask(g), m);
  EXPECT_EQ(count_foreground(m), 1u);
}
