#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "properties.hpp"
#include "retinoblob/blob.hpp"

using namespace retinoblob;

namespace {

const GrayImage kGray(64, 64, 100);
const HueMap kNoHue(64, 64);

Blob measure(PixelSet px) { return measure_blob(std::move(px), Source::sei, kGray, kNoHue); }

PixelSet rect(int x0, int y0, int w, int h) {
  PixelSet px;
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) px.push_back({x, y});
  return px;
}

}  // namespace

TEST(Label, Trivial) {
  EXPECT_TRUE(label_components(BinaryMask(5, 5)).empty());
  BinaryMask diag(3, 3);
  diag(0, 0) = diag(1, 1) = 1;
  EXPECT_EQ(label_components(diag).size(), 1u);
}

TEST(Label, URequiresMerge) {
  // two arms that only meet at the bottom row
  BinaryMask u(5, 4);
  for (int y = 0; y < 4; ++y) u(0, y) = u(4, y) = 1;
  for (int x = 0; x < 5; ++x) u(x, 3) = 1;
  const auto comps = label_components(u);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].size(), 11u);
}

TEST(Label, MatchesFloodFill) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int i = 0; i < 200; ++i)
    ASSERT_EQ(props::labeling_matches_oracle(oracle::random_mask(rng, 32, 32, density(rng))), "") << i;
}

TEST(Perimeter, Fixtures) {
  EXPECT_EQ(measure_perimeter({{0, 0}}), 4u);
  EXPECT_EQ(measure_perimeter(rect(0, 0, 2, 2)), 8u);
  EXPECT_EQ(measure_perimeter(rect(0, 0, 3, 1)), 8u);
  EXPECT_EQ(measure_perimeter(rect(0, 0, 3, 3)), 12u);
  EXPECT_EQ(measure_perimeter(rect(0, 0, 5, 1)), 12u);
  // a hole contributes its inner edges
  auto ring = rect(0, 0, 3, 3);
  ring.erase(ring.begin() + 4);
  EXPECT_EQ(measure_perimeter(ring), 16u);
}

TEST(Features, SinglePixel) {
  const auto b = measure({{3, 4}});
  EXPECT_EQ(b.area, 1u);
  EXPECT_EQ(b.perimeter, 4u);
  EXPECT_NEAR(b.compactness, 16.0 / (4 * std::numbers::pi), 1e-9);
  EXPECT_DOUBLE_EQ(b.intensity_mid, 100.0);
  EXPECT_NEAR(b.centroid.x, 3.0, 1e-9);
  EXPECT_NEAR(b.centroid.y, 4.0, 1e-9);
  EXPECT_NEAR(b.orientation, 0.0, 1e-9);
}

TEST(Features, Square2x2) {
  const auto b = measure(rect(6, 6, 2, 2));
  EXPECT_EQ(b.perimeter, 8u);
  EXPECT_NEAR(b.compactness, 64.0 / (16 * std::numbers::pi), 1e-9);
  EXPECT_NEAR(b.centroid.x, 6.5, 1e-9);
  EXPECT_NEAR(b.centroid.y, 6.5, 1e-9);
  EXPECT_NEAR(b.orientation, 0.0, 1e-9);
}

TEST(Features, Bar1x5) {
  const auto b = measure(rect(2, 9, 5, 1));
  EXPECT_EQ(b.perimeter, 12u);
  EXPECT_NEAR(b.compactness, 144.0 / (20 * std::numbers::pi), 1e-9);
  EXPECT_NEAR(b.centroid.x, 4.0, 1e-9);
  EXPECT_NEAR(b.centroid.y, 9.0, 1e-9);
  EXPECT_GT(b.moments.mu20, b.moments.mu02);
  EXPECT_EQ(b.moments.mu11, 0.0);
  EXPECT_NEAR(b.orientation, 0.0, 1e-9);
}

TEST(Features, Square3x3) {
  const auto b = measure(rect(10, 20, 3, 3));
  EXPECT_EQ(b.perimeter, 12u);
  EXPECT_NEAR(b.compactness, 144.0 / (36 * std::numbers::pi), 1e-9);
  EXPECT_NEAR(b.centroid.x, 11.0, 1e-9);
  EXPECT_NEAR(b.centroid.y, 21.0, 1e-9);
  EXPECT_NEAR(b.orientation, 0.0, 1e-9);
}

TEST(Features, OrientationConvention) {
  EXPECT_NEAR(measure(rect(5, 5, 1, 9)).orientation, std::numbers::pi / 2, 1e-9);
  // diagonal with y pointing down: x and y grow together
  PixelSet diag;
  for (int i = 0; i < 6; ++i) diag.push_back({10 + i, 10 + i});
  EXPECT_NEAR(measure(diag).orientation, std::numbers::pi / 4, 1e-9);
  PixelSet anti;
  for (int i = 0; i < 6; ++i) anti.push_back({20 - i, 10 + i});
  EXPECT_NEAR(measure(anti).orientation, -std::numbers::pi / 4, 1e-9);
}

TEST(Features, DigitalDisks) {
  double previous = 1e9;
  for (int r : {2, 5, 10, 20}) {
    PixelSet px;
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (dx * dx + dy * dy <= r * r) px.push_back({31 + dx, 31 + dy});
    const auto b = measure(px);
    // row- and column-convex, so the exposed edges equal the bounding box perimeter
    const std::size_t p = 4 * (2 * r + 1);
    EXPECT_EQ(b.perimeter, p) << r;
    EXPECT_NEAR(b.compactness, static_cast<double>(p * p) / (4 * std::numbers::pi * px.size()), 1e-12);
    // the staircase keeps digital disks above 1, falling towards 16/pi^2
    EXPECT_GT(b.compactness, 16.0 / (std::numbers::pi * std::numbers::pi)) << r;
    EXPECT_LT(b.compactness, previous) << r;
    previous = b.compactness;
    EXPECT_NEAR(b.centroid.x, 31.0, 1e-9);
    EXPECT_EQ(b.orientation, 0.0);
  }
}

TEST(Features, IntensityAndHue) {
  GrayImage gray(4, 1, std::vector<std::uint8_t>{10, 50, 90, 200});
  HueMap hue(4, 1);
  hue(0, 0) = 0.1;
  hue(1, 0) = 0.2;
  const auto b = measure_blob({{0, 0}, {1, 0}, {2, 0}}, Source::shi, gray, hue, 7);
  EXPECT_EQ(b.id, 7);
  EXPECT_EQ(b.source, Source::shi);
  EXPECT_DOUBLE_EQ(b.intensity_mid, 50.0);
  ASSERT_TRUE(b.mean_hue.has_value());
  EXPECT_NEAR(*b.mean_hue, 0.15, 1e-12);
  EXPECT_FALSE(measure_blob({{3, 0}}, Source::sei, gray, hue).mean_hue.has_value());
}

TEST(Features, Errors) {
  EXPECT_THROW((void)measure({}), DataError);
  EXPECT_THROW((void)measure({{64, 0}}), DataError);
  EXPECT_THROW((void)measure_blob({{0, 0}}, Source::sei, kGray, HueMap(3, 3)), DataError);
}

TEST(ExtractBlobs, IdsFollowRasterOrder) {
  BinaryMask m(10, 10);
  m(8, 1) = 1;
  m(1, 5) = m(2, 5) = 1;
  m(0, 0) = 1;
  const auto blobs = extract_blobs(m, Source::shi, GrayImage(10, 10), HueMap(10, 10), 4);
  ASSERT_EQ(blobs.size(), 3u);
  EXPECT_EQ(blobs[0].id, 4);
  EXPECT_EQ(blobs[0].pixels.front(), (Point{0, 0}));
  EXPECT_EQ(blobs[1].pixels.front(), (Point{8, 1}));
  EXPECT_EQ(blobs[2].area, 2u);
}

TEST(BlobTable, HeaderAndRow) {
  std::ostringstream out;
  write_blob_table(out, {measure({{3, 4}})});
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kBlobCsvHeader);
  EXPECT_NE(text.find("1,SEI,1,4,"), std::string::npos);
}
