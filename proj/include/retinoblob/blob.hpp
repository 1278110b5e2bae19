#pragma once

// Connected-component labelling and per-blob shape/colour features.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "retinoblob/error.hpp"
#include "retinoblob/image.hpp"

namespace retinoblob {

/// Which pre-processed mask a blob came from.
enum class Source { sei, shi };

[[nodiscard]] inline std::string_view to_string(Source s) { return s == Source::sei ? "SEI" : "SHI"; }

using PixelSet = std::vector<Point>;

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

/// Second-order central moments (sums, not normalised by area).
struct CentralMoments {
  double mu20 = 0.0;
  double mu02 = 0.0;
  double mu11 = 0.0;
};

struct Blob {
  int id = 0;
  Source source = Source::sei;
  PixelSet pixels;
  std::size_t area = 0;
  std::size_t perimeter = 0;
  double compactness = 0.0;
  double intensity_mid = 0.0;
  std::optional<double> mean_hue;
  Centroid centroid;
  CentralMoments moments;
  double orientation = 0.0;
};

// ---------------------------------------------------------------------------
// Labelling

namespace detail {

class DisjointSets {
 public:
  int make() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      auto& p = parent_[static_cast<std::size_t>(v)];
      p = parent_[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // smaller root wins so the final labels follow raster order of first pixels
    if (b < a) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Two-pass union-find labelling, 8-connectivity. Components are returned in
/// raster order of their first pixel, each with pixels in raster order.
[[nodiscard]] inline std::vector<PixelSet> label_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<PixelSet> out;
  if (mask.empty()) return out;
  Raster<int> labels(mask.size(), -1);
  detail::DisjointSets sets;

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      int label = -1;
      // already-visited neighbours: W, NW, N, NE
      constexpr int kPrior[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
      for (const auto& [dx, dy] : kPrior) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w) continue;
        const int l = labels(nx, ny);
        if (l < 0) continue;
        if (label < 0)
          label = l;
        else
          sets.join(label, l);
      }
      labels(x, y) = label < 0 ? sets.make() : label;
    }

  std::vector<int> compact;  // root -> output index
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int l = labels(x, y);
      if (l < 0) continue;
      const auto root = static_cast<std::size_t>(sets.find(l));
      if (compact.size() <= root) compact.resize(root + 1, -1);
      if (compact[root] < 0) {
        compact[root] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[static_cast<std::size_t>(compact[root])].push_back({x, y});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Features

namespace detail {

struct Bounds {
  int x0, y0, x1, y1;  // inclusive
};

inline Bounds bounds_of(const PixelSet& pixels) {
  Bounds b{pixels.front().x, pixels.front().y, pixels.front().x, pixels.front().y};
  for (const Point p : pixels) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

}  // namespace detail

/// Count of unit edges shared between a blob pixel and a non-blob pixel.
/// Pixels past the raster border count as non-blob.
[[nodiscard]] inline std::size_t measure_perimeter(const PixelSet& pixels) {
  if (pixels.empty()) throw DataError("measure_perimeter: empty pixel set");
  const auto b = detail::bounds_of(pixels);
  const int bw = b.x1 - b.x0 + 3;
  const int bh = b.y1 - b.y0 + 3;
  Raster<std::uint8_t> local(bw, bh, 0);
  for (const Point p : pixels) local(p.x - b.x0 + 1, p.y - b.y0 + 1) = 1;
  std::size_t edges = 0;
  for (const Point p : pixels) {
    const int lx = p.x - b.x0 + 1, ly = p.y - b.y0 + 1;
    edges += !local(lx - 1, ly) + !local(lx + 1, ly) + !local(lx, ly - 1) + !local(lx, ly + 1);
  }
  return edges;
}

/// P^2 / (4 pi A).
[[nodiscard]] inline double compactness_of(std::size_t perimeter, std::size_t area) {
  const double p = static_cast<double>(perimeter);
  return p * p / (4.0 * std::numbers::pi * static_cast<double>(area));
}

/// Major-axis angle from central moments, y pointing down, in (-pi/2, pi/2].
[[nodiscard]] inline double orientation_of(const CentralMoments& m) {
  if (m.mu11 == 0.0 && m.mu20 == m.mu02) return 0.0;
  double theta = 0.5 * std::atan2(2.0 * m.mu11, m.mu20 - m.mu02);
  if (theta <= -std::numbers::pi / 2) theta += std::numbers::pi;
  return theta;
}

[[nodiscard]] inline Blob measure_blob(PixelSet pixels, Source source, const GrayImage& gray,
                                       const HueMap& hue, int id = 1) {
  if (pixels.empty()) throw DataError("measure_blob: empty pixel set");
  if (gray.size() != hue.size()) throw DataError("measure_blob: gray and hue rasters differ in size");
  for (const Point p : pixels)
    if (!gray.size().contains(p))
      throw DataError("measure_blob: pixel (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") outside raster");

  Blob blob;
  blob.id = id;
  blob.source = source;
  blob.area = pixels.size();
  blob.perimeter = measure_perimeter(pixels);
  blob.compactness = compactness_of(blob.perimeter, blob.area);

  // Moments from exact integer raw sums: n * mu_pq is an integer, so
  // symmetric shapes give exactly zero mu11 and exactly equal mu20/mu02.
  std::uint8_t lo = 255, hi = 0;
  double hue_sum = 0.0;
  std::size_t hue_count = 0;
  long long sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const Point p : pixels) {
    lo = std::min(lo, gray[p]);
    hi = std::max(hi, gray[p]);
    if (const auto& h = hue[p]) {
      hue_sum += *h;
      ++hue_count;
    }
    sx += p.x;
    sy += p.y;
    sxx += static_cast<long long>(p.x) * p.x;
    syy += static_cast<long long>(p.y) * p.y;
    sxy += static_cast<long long>(p.x) * p.y;
  }
  blob.intensity_mid = (static_cast<double>(lo) + hi) / 2.0;
  if (hue_count > 0) blob.mean_hue = hue_sum / static_cast<double>(hue_count);
  const auto n = static_cast<long long>(blob.area);
  const double nd = static_cast<double>(n);
  blob.centroid = {static_cast<double>(sx) / nd, static_cast<double>(sy) / nd};
  const long long n20 = n * sxx - sx * sx;
  const long long n02 = n * syy - sy * sy;
  const long long n11 = n * sxy - sx * sy;
  blob.moments = {static_cast<double>(n20) / nd, static_cast<double>(n02) / nd, static_cast<double>(n11) / nd};
  blob.orientation = orientation_of(
      {static_cast<double>(n20), static_cast<double>(n02), static_cast<double>(n11)});
  blob.pixels = std::move(pixels);
  return blob;
}

/// Labels a mask and measures every component. Ids start at first_id and
/// follow label order.
[[nodiscard]] inline std::vector<Blob> extract_blobs(const BinaryMask& mask, Source source,
                                                     const GrayImage& gray, const HueMap& hue,
                                                     int first_id = 1) {
  if (mask.size() != gray.size()) throw DataError("extract_blobs: mask and gray rasters differ in size");
  auto components = label_components(mask);
  std::vector<Blob> blobs;
  blobs.reserve(components.size());
  int id = first_id;
  for (auto& c : components) blobs.push_back(measure_blob(std::move(c), source, gray, hue, id++));
  return blobs;
}

inline constexpr std::string_view kBlobCsvHeader =
    "id,source,area,perimeter,compactness,intensity_mid,mean_hue,cx,cy,orientation";

/// One CSV row in kBlobCsvHeader column order; undefined hue is an empty field.
inline void write_blob_row(std::ostream& out, const Blob& b) {
  char buf[256];
  std::string hue;
  if (b.mean_hue) {
    std::snprintf(buf, sizeof buf, "%.6f", *b.mean_hue);
    hue = buf;
  }
  std::snprintf(buf, sizeof buf, "%d,%s,%zu,%zu,%.6f,%.1f,%s,%.4f,%.4f,%.6f", b.id,
                std::string(to_string(b.source)).c_str(), b.area, b.perimeter, b.compactness,
                b.intensity_mid, hue.c_str(), b.centroid.x, b.centroid.y, b.orientation);
  out << buf << '\n';
}

inline void write_blob_table(std::ostream& out, const std::vector<Blob>& blobs) {
  out << kBlobCsvHeader << '\n';
  for (const auto& b : blobs) write_blob_row(out, b);
}

}  // namespace retinoblob
