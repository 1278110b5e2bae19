#pragma once

// Raster containers and the colour conversions every later stage reads from.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "retinoblob/error.hpp"

namespace retinoblob {

struct Point {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(Point, Point) = default;
  friend constexpr auto operator<=>(Point a, Point b) {
    // raster order: row first
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct Size {
  int width = 0;
  int height = 0;
  friend constexpr bool operator==(Size, Size) = default;
  [[nodiscard]] constexpr std::size_t area() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  [[nodiscard]] constexpr bool contains(Point p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height;
  }
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend constexpr bool operator==(Rgb, Rgb) = default;
};

/// Row-major 2-D pixel buffer. The tag parameter keeps rasters with the same
/// storage type (gray levels vs. mask bits) from being mixed up.
template <typename T, typename Tag = void>
class Raster {
 public:
  using value_type = T;

  Raster() = default;

  Raster(int width, int height, T fill = T{}) : size_{width, height} {
    if (width < 1 || height < 1)
      throw DataError("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
    pixels_.assign(size_.area(), fill);
  }

  explicit Raster(Size size, T fill = T{}) : Raster(size.width, size.height, fill) {}

  Raster(int width, int height, std::vector<T> pixels) : Raster(width, height) {
    if (pixels.size() != size_.area())
      throw DataError("pixel count " + std::to_string(pixels.size()) + " does not match " +
                      std::to_string(width) + "x" + std::to_string(height));
    pixels_ = std::move(pixels);
  }

  [[nodiscard]] int width() const { return size_.width; }
  [[nodiscard]] int height() const { return size_.height; }
  [[nodiscard]] Size size() const { return size_; }
  [[nodiscard]] bool empty() const { return pixels_.empty(); }

  T& operator()(int x, int y) { return pixels_[index(x, y)]; }
  const T& operator()(int x, int y) const { return pixels_[index(x, y)]; }
  T& operator[](Point p) { return (*this)(p.x, p.y); }
  const T& operator[](Point p) const { return (*this)(p.x, p.y); }

  [[nodiscard]] std::span<T> row(int y) {
    return {pixels_.data() + index(0, y), static_cast<std::size_t>(size_.width)};
  }
  [[nodiscard]] std::span<const T> row(int y) const {
    return {pixels_.data() + index(0, y), static_cast<std::size_t>(size_.width)};
  }

  [[nodiscard]] std::vector<T>& pixels() { return pixels_; }
  [[nodiscard]] const std::vector<T>& pixels() const { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  [[nodiscard]] std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(size_.width) +
           static_cast<std::size_t>(x);
  }

  Size size_{};
  std::vector<T> pixels_;
};

struct MaskTag;

using ColorImage = Raster<Rgb>;
using GrayImage = Raster<std::uint8_t>;
/// Boolean raster stored one byte per pixel; 1 = foreground, 0 = background.
using BinaryMask = Raster<std::uint8_t, MaskTag>;
/// Hue in [0,1); std::nullopt where the pixel is achromatic.
using HueMap = Raster<std::optional<double>>;

[[nodiscard]] inline std::size_t count_foreground(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.pixels().begin(), mask.pixels().end(), [](auto v) { return v != 0; }));
}

// ---------------------------------------------------------------------------
// Colour conversions

/// BT.601 luma, rounded half-up in exact integer arithmetic.
[[nodiscard]] constexpr std::uint8_t luma(Rgb c) {
  const int weighted = 299 * c.r + 587 * c.g + 114 * c.b;
  return static_cast<std::uint8_t>((weighted + 500) / 1000);
}

[[nodiscard]] inline GrayImage to_gray(const ColorImage& img) {
  GrayImage out(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(), luma);
  return out;
}

/// Hexagonal HSV hue scaled to [0,1); nullopt when max == min.
[[nodiscard]] inline std::optional<double> hue_of(Rgb c) {
  const int mx = std::max({c.r, c.g, c.b});
  const int mn = std::min({c.r, c.g, c.b});
  if (mx == mn) return std::nullopt;
  const double delta = mx - mn;
  double sector;
  if (mx == c.r)
    sector = (c.g - c.b) / delta;
  else if (mx == c.g)
    sector = (c.b - c.r) / delta + 2.0;
  else
    sector = (c.r - c.g) / delta + 4.0;
  double h = sector / 6.0;
  if (h < 0.0) h += 1.0;
  if (h >= 1.0) h -= 1.0;
  return h;
}

[[nodiscard]] inline HueMap to_hue(const ColorImage& img) {
  HueMap out(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(), hue_of);
  return out;
}

[[nodiscard]] inline Rgb gray_to_rgb(std::uint8_t v) { return {v, v, v}; }

[[nodiscard]] inline ColorImage to_color(const GrayImage& img) {
  ColorImage out(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(), gray_to_rgb);
  return out;
}

[[nodiscard]] inline GrayImage mask_to_gray(const BinaryMask& mask) {
  GrayImage out(mask.size());
  std::transform(mask.pixels().begin(), mask.pixels().end(), out.pixels().begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
  return out;
}

/// Foreground where the gray level is at least 128.
[[nodiscard]] inline BinaryMask gray_to_mask(const GrayImage& img) {
  BinaryMask out(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v >= 128 ? 1 : 0; });
  return out;
}

// ---------------------------------------------------------------------------
// Resampling

inline constexpr Size kStandardSize{752, 500};

/// Bilinear resize using pixel-centre alignment, edges clamped.
[[nodiscard]] inline ColorImage resize_to_standard(const ColorImage& img,
                                                   int target_w = kStandardSize.width,
                                                   int target_h = kStandardSize.height) {
  if (target_w < 1 || target_h < 1)
    throw DataError("resize target must be positive, got " + std::to_string(target_w) + "x" +
                    std::to_string(target_h));
  if (img.width() == target_w && img.height() == target_h) return img;

  struct Tap {
    int lo, hi;
    double frac;
  };
  auto taps = [](int src, int dst) {
    std::vector<Tap> out(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
      double s = (i + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src - 1));
      const int lo = static_cast<int>(std::floor(s));
      const int hi = std::min(lo + 1, src - 1);
      out[static_cast<std::size_t>(i)] = {lo, hi, s - lo};
    }
    return out;
  };
  const auto xs = taps(img.width(), target_w);
  const auto ys = taps(img.height(), target_h);

  ColorImage out(target_w, target_h);
  for (int y = 0; y < target_h; ++y) {
    const Tap ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < target_w; ++x) {
      const Tap tx = xs[static_cast<std::size_t>(x)];
      auto channel = [&](std::uint8_t Rgb::*ch) {
        const double top = img(tx.lo, ty.lo).*ch * (1.0 - tx.frac) + img(tx.hi, ty.lo).*ch * tx.frac;
        const double bot = img(tx.lo, ty.hi).*ch * (1.0 - tx.frac) + img(tx.hi, ty.hi).*ch * tx.frac;
        const double v = top * (1.0 - ty.frac) + bot * ty.frac;
        return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      };
      out(x, y) = {channel(&Rgb::r), channel(&Rgb::g), channel(&Rgb::b)};
    }
  }
  return out;
}

}  // namespace retinoblob
