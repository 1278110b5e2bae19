#pragma once

// Flat grayscale and binary morphology over arbitrary structuring elements.
//
// The production path decomposes the structuring element into horizontal
// runs and reuses per-row running extrema for every run length; the naive
// per-offset evaluation is kept in detail:: as the reference it must match
// bit for bit.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "retinoblob/error.hpp"
#include "retinoblob/image.hpp"

namespace retinoblob {

struct Offset {
  int dx = 0;
  int dy = 0;
  friend constexpr bool operator==(Offset, Offset) = default;
  friend constexpr auto operator<=>(Offset, Offset) = default;
};

/// Flat neighbourhood anchored at (0,0).
class StructuringElement {
 public:
  /// A maximal horizontal segment {(dx, dy) : x0 <= dx <= x1}.
  struct Run {
    int dy;
    int x0;
    int x1;
    [[nodiscard]] int length() const { return x1 - x0 + 1; }
  };

  explicit StructuringElement(std::vector<Offset> offsets) {
    std::set<Offset> unique(offsets.begin(), offsets.end());
    if (!unique.contains(Offset{0, 0})) throw DataError("structuring element must contain the origin");
    offsets_.assign(unique.begin(), unique.end());
    // offsets_ is sorted by (dx, dy); build runs from a (dy, dx) ordering
    std::vector<Offset> by_row = offsets_;
    std::sort(by_row.begin(), by_row.end(),
              [](Offset a, Offset b) { return a.dy != b.dy ? a.dy < b.dy : a.dx < b.dx; });
    for (const Offset o : by_row) {
      if (!runs_.empty() && runs_.back().dy == o.dy && runs_.back().x1 + 1 == o.dx)
        runs_.back().x1 = o.dx;
      else
        runs_.push_back({o.dy, o.dx, o.dx});
    }
  }

  [[nodiscard]] const std::vector<Offset>& offsets() const { return offsets_; }
  [[nodiscard]] const std::vector<Run>& runs() const { return runs_; }
  [[nodiscard]] std::size_t size() const { return offsets_.size(); }

  [[nodiscard]] bool is_symmetric() const {
    return std::all_of(offsets_.begin(), offsets_.end(), [this](Offset o) {
      return std::binary_search(offsets_.begin(), offsets_.end(), Offset{-o.dx, -o.dy});
    });
  }

 private:
  std::vector<Offset> offsets_;
  std::vector<Run> runs_;
};

/// Exact Euclidean integer disk: all (dx,dy) with dx^2 + dy^2 <= radius^2.
[[nodiscard]] inline StructuringElement disk(int radius) {
  if (radius < 0) throw DataError("disk radius must be non-negative");
  std::vector<Offset> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
  return StructuringElement(std::move(offsets));
}

namespace detail {

template <typename Reduce>
GrayImage rank_filter_reference(const GrayImage& img, const StructuringElement& se,
                                std::uint8_t neutral, Reduce reduce) {
  GrayImage out(img.size());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      std::uint8_t acc = neutral;
      for (const Offset o : se.offsets()) {
        const Point p{x + o.dx, y + o.dy};
        acc = reduce(acc, img.size().contains(p) ? img[p] : neutral);
      }
      out(x, y) = acc;
    }
  return out;
}

/// Naive O(|se|) per pixel erosion. Out-of-bounds samples read 255.
[[nodiscard]] inline GrayImage erode_reference(const GrayImage& img, const StructuringElement& se) {
  return rank_filter_reference(img, se, 255, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); });
}

/// Naive O(|se|) per pixel dilation. Out-of-bounds samples read 0.
[[nodiscard]] inline GrayImage dilate_reference(const GrayImage& img, const StructuringElement& se) {
  return rank_filter_reference(img, se, 0, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
}

template <typename Reduce>
GrayImage rank_filter(const GrayImage& img, const StructuringElement& se, std::uint8_t neutral,
                      Reduce reduce) {
  const int w = img.width();
  const int h = img.height();
  int pad = 0;
  int max_len = 0;
  std::vector<int> lengths;
  for (const auto& r : se.runs()) {
    pad = std::max({pad, -r.x0, r.x1});
    max_len = std::max(max_len, r.length());
    lengths.push_back(r.length());
  }
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  std::vector<int> slot(static_cast<std::size_t>(max_len + 1), -1);
  for (std::size_t i = 0; i < lengths.size(); ++i) slot[static_cast<std::size_t>(lengths[i])] = static_cast<int>(i);

  // extrema[slot][row][i] = reduce over padded_row[i .. i + len - 1]
  const int stride = w + 2 * pad;
  std::vector<std::uint8_t> extrema(lengths.size() * static_cast<std::size_t>(h) * static_cast<std::size_t>(stride),
                                    neutral);
  auto line = [&](std::size_t s, int y) {
    return extrema.data() + (s * static_cast<std::size_t>(h) + static_cast<std::size_t>(y)) *
                                static_cast<std::size_t>(stride);
  };
  std::vector<std::uint8_t> padded(static_cast<std::size_t>(stride));
  std::vector<std::uint8_t> running(static_cast<std::size_t>(stride));
  for (int y = 0; y < h; ++y) {
    std::fill(padded.begin(), padded.end(), neutral);
    const auto src = img.row(y);
    std::copy(src.begin(), src.end(), padded.begin() + pad);
    running = padded;
    for (int len = 1; len <= max_len; ++len) {
      if (len > 1)
        for (int i = 0; i + len <= stride; ++i)
          running[static_cast<std::size_t>(i)] =
              reduce(running[static_cast<std::size_t>(i)], padded[static_cast<std::size_t>(i + len - 1)]);
      if (const int s = slot[static_cast<std::size_t>(len)]; s >= 0)
        std::copy(running.begin(), running.begin() + (stride - len + 1), line(static_cast<std::size_t>(s), y));
    }
  }

  GrayImage out(img.size(), neutral);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (const auto& r : se.runs()) {
      const int sy = y + r.dy;
      if (sy < 0 || sy >= h) continue;
      const std::uint8_t* ext = line(static_cast<std::size_t>(slot[static_cast<std::size_t>(r.length())]), sy) +
                                (r.x0 + pad);
      for (int x = 0; x < w; ++x)
        dst[static_cast<std::size_t>(x)] = reduce(dst[static_cast<std::size_t>(x)], ext[x]);
    }
  }
  return out;
}

inline std::uint8_t min8(std::uint8_t a, std::uint8_t b) { return a < b ? a : b; }
inline std::uint8_t max8(std::uint8_t a, std::uint8_t b) { return a > b ? a : b; }

}  // namespace detail

/// out(p) = min over o in se of img(p + o); out-of-bounds reads 255.
[[nodiscard]] inline GrayImage erode(const GrayImage& img, const StructuringElement& se) {
  return detail::rank_filter(img, se, 255, detail::min8);
}

/// out(p) = max over o in se of img(p + o); out-of-bounds reads 0.
[[nodiscard]] inline GrayImage dilate(const GrayImage& img, const StructuringElement& se) {
  return detail::rank_filter(img, se, 0, detail::max8);
}

[[nodiscard]] inline GrayImage open(const GrayImage& img, const StructuringElement& se) {
  return dilate(erode(img, se), se);
}

[[nodiscard]] inline GrayImage close(const GrayImage& img, const StructuringElement& se) {
  return erode(dilate(img, se), se);
}

/// max(a - b, 0) per pixel.
[[nodiscard]] inline GrayImage subtract_saturate(const GrayImage& a, const GrayImage& b) {
  if (a.size() != b.size()) throw DataError("subtract_saturate: size mismatch");
  GrayImage out(a.size());
  std::transform(a.pixels().begin(), a.pixels().end(), b.pixels().begin(), out.pixels().begin(),
                 [](std::uint8_t x, std::uint8_t y) -> std::uint8_t { return x > y ? x - y : 0; });
  return out;
}

[[nodiscard]] inline GrayImage tophat(const GrayImage& img, const StructuringElement& se) {
  return subtract_saturate(img, open(img, se));
}

[[nodiscard]] inline GrayImage bothat(const GrayImage& img, const StructuringElement& se) {
  return subtract_saturate(close(img, se), img);
}

// Binary variants run the grayscale operators on a {0,255} raster, so the
// border policy (background for dilation, foreground for erosion) follows
// from the grayscale padding.

[[nodiscard]] inline BinaryMask erode_mask(const BinaryMask& mask, const StructuringElement& se) {
  return gray_to_mask(erode(mask_to_gray(mask), se));
}

[[nodiscard]] inline BinaryMask dilate_mask(const BinaryMask& mask, const StructuringElement& se) {
  return gray_to_mask(dilate(mask_to_gray(mask), se));
}

[[nodiscard]] inline BinaryMask open_mask(const BinaryMask& mask, const StructuringElement& se) {
  return gray_to_mask(open(mask_to_gray(mask), se));
}

[[nodiscard]] inline BinaryMask close_mask(const BinaryMask& mask, const StructuringElement& se) {
  return gray_to_mask(close(mask_to_gray(mask), se));
}

}  // namespace retinoblob
