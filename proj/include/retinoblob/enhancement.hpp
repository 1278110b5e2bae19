#pragma once

// Contrast-limited adaptive histogram equalisation and linear contrast stretch.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "retinoblob/error.hpp"
#include "retinoblob/image.hpp"

namespace retinoblob {

struct ClaheParams {
  int tiles_x = 8;
  int tiles_y = 8;
  /// Multiple of the uniform bin height (tile_pixels / 256) at which bins are clipped.
  double clip_limit = 3.0;

  friend bool operator==(const ClaheParams&, const ClaheParams&) = default;

  void validate() const {
    if (tiles_x < 1 || tiles_y < 1) throw DataError("clahe tile counts must be >= 1");
    if (!(clip_limit > 1.0)) throw DataError("clahe clip_limit must be > 1");
  }
};

using ToneCurve = std::array<std::uint8_t, 256>;

/// Histogram-equalisation curve of a (possibly clipped) histogram:
/// v -> round(255 * cdf(v) / total).
[[nodiscard]] inline ToneCurve equalisation_curve(const std::array<double, 256>& hist) {
  double total = 0.0;
  for (double h : hist) total += h;
  ToneCurve curve{};
  double cdf = 0.0;
  for (std::size_t v = 0; v < 256; ++v) {
    cdf += hist[v];
    const double mapped = total > 0.0 ? 255.0 * cdf / total : static_cast<double>(v);
    curve[v] = static_cast<std::uint8_t>(std::clamp(std::floor(mapped + 0.5), 0.0, 255.0));
  }
  return curve;
}

/// Clip every bin at `limit` and hand the excess back uniformly (one pass, no re-clip).
inline void clip_histogram(std::array<double, 256>& hist, double limit) {
  double excess = 0.0;
  for (double& h : hist)
    if (h > limit) {
      excess += h - limit;
      h = limit;
    }
  const double share = excess / 256.0;
  for (double& h : hist) h += share;
}

namespace detail {

// Tile boundaries along one axis: tile i spans [edges[i], edges[i + 1]).
inline std::vector<int> tile_edges(int extent, int tiles) {
  std::vector<int> edges(static_cast<std::size_t>(tiles) + 1);
  for (int i = 0; i <= tiles; ++i)
    edges[static_cast<std::size_t>(i)] =
        static_cast<int>(static_cast<long long>(i) * extent / tiles);
  return edges;
}

// For a coordinate, the two neighbouring tile indices and the weight of the second.
struct Blend {
  int lo, hi;
  double w;
};

inline std::vector<Blend> tile_blend(const std::vector<int>& edges, int extent) {
  const int tiles = static_cast<int>(edges.size()) - 1;
  std::vector<double> centres(static_cast<std::size_t>(tiles));
  for (int i = 0; i < tiles; ++i)
    centres[static_cast<std::size_t>(i)] =
        0.5 * (edges[static_cast<std::size_t>(i)] + edges[static_cast<std::size_t>(i) + 1] - 1);
  std::vector<Blend> out(static_cast<std::size_t>(extent));
  int t = 0;
  for (int p = 0; p < extent; ++p) {
    if (p <= centres.front()) {
      out[static_cast<std::size_t>(p)] = {0, 0, 0.0};
    } else if (p >= centres.back()) {
      out[static_cast<std::size_t>(p)] = {tiles - 1, tiles - 1, 0.0};
    } else {
      while (centres[static_cast<std::size_t>(t) + 1] < p) ++t;
      const double c0 = centres[static_cast<std::size_t>(t)];
      const double c1 = centres[static_cast<std::size_t>(t) + 1];
      out[static_cast<std::size_t>(p)] = {t, t + 1, (p - c0) / (c1 - c0)};
    }
  }
  return out;
}

}  // namespace detail

/// CLAHE with per-tile clipped histograms blended bilinearly between tile centres.
[[nodiscard]] inline GrayImage clahe(const GrayImage& img, const ClaheParams& params = {}) {
  params.validate();
  if (img.width() < params.tiles_x || img.height() < params.tiles_y)
    throw DataError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                    " is smaller than the " + std::to_string(params.tiles_x) + "x" +
                    std::to_string(params.tiles_y) + " tile grid");

  const auto ex = detail::tile_edges(img.width(), params.tiles_x);
  const auto ey = detail::tile_edges(img.height(), params.tiles_y);
  std::vector<ToneCurve> curves(static_cast<std::size_t>(params.tiles_x * params.tiles_y));
  for (int ty = 0; ty < params.tiles_y; ++ty)
    for (int tx = 0; tx < params.tiles_x; ++tx) {
      std::array<double, 256> hist{};
      const int x0 = ex[static_cast<std::size_t>(tx)], x1 = ex[static_cast<std::size_t>(tx) + 1];
      const int y0 = ey[static_cast<std::size_t>(ty)], y1 = ey[static_cast<std::size_t>(ty) + 1];
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) hist[img(x, y)] += 1.0;
      const double tile_pixels = static_cast<double>(x1 - x0) * (y1 - y0);
      clip_histogram(hist, params.clip_limit * tile_pixels / 256.0);
      curves[static_cast<std::size_t>(ty * params.tiles_x + tx)] = equalisation_curve(hist);
    }

  const auto bx = detail::tile_blend(ex, img.width());
  const auto by = detail::tile_blend(ey, img.height());
  auto curve = [&](int tx, int ty) -> const ToneCurve& {
    return curves[static_cast<std::size_t>(ty * params.tiles_x + tx)];
  };
  GrayImage out(img.size());
  for (int y = 0; y < img.height(); ++y) {
    const auto b = by[static_cast<std::size_t>(y)];
    for (int x = 0; x < img.width(); ++x) {
      const auto a = bx[static_cast<std::size_t>(x)];
      const std::uint8_t v = img(x, y);
      const double top = curve(a.lo, b.lo)[v] * (1.0 - a.w) + curve(a.hi, b.lo)[v] * a.w;
      const double bot = curve(a.lo, b.hi)[v] * (1.0 - a.w) + curve(a.hi, b.hi)[v] * a.w;
      const double mixed = top * (1.0 - b.w) + bot * b.w;
      out(x, y) = static_cast<std::uint8_t>(std::clamp(std::floor(mixed + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

/// Linear stretch mapping the low_frac / (1 - high_frac) quantiles to 0 and 255.
/// Constant (or degenerate-range) input is returned unchanged.
[[nodiscard]] inline GrayImage adjust_intensity(const GrayImage& img, double low_frac = 0.01,
                                                double high_frac = 0.01) {
  if (low_frac < 0.0 || high_frac < 0.0 || low_frac >= 0.5 || high_frac >= 0.5)
    throw DataError("stretch fractions must lie in [0, 0.5)");
  std::array<std::size_t, 256> hist{};
  for (auto v : img.pixels()) ++hist[v];
  const double total = static_cast<double>(img.pixels().size());

  // low: first level whose cumulative count exceeds low_frac of the mass
  // high: first level whose cumulative count reaches (1 - high_frac) of the mass
  int lo = 255, hi = 255;
  std::size_t cum = 0;
  bool lo_found = false;
  for (int v = 0; v < 256; ++v) {
    cum += hist[static_cast<std::size_t>(v)];
    if (!lo_found && static_cast<double>(cum) > low_frac * total) {
      lo = v;
      lo_found = true;
    }
    if (static_cast<double>(cum) >= (1.0 - high_frac) * total) {
      hi = v;
      break;
    }
  }
  if (hi <= lo) return img;

  ToneCurve lut{};
  for (int v = 0; v < 256; ++v) {
    const double mapped = (v - lo) * 255.0 / (hi - lo);
    lut[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(std::clamp(std::floor(mapped + 0.5), 0.0, 255.0));
  }
  GrayImage out(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(),
                 [&](std::uint8_t v) { return lut[v]; });
  return out;
}

}  // namespace retinoblob
