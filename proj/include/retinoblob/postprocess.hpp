#pragma once

// Merging SEI/SHI candidates and annotating them with oriented ellipses.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "retinoblob/blob.hpp"
#include "retinoblob/image.hpp"

namespace retinoblob {

struct EllipseAnnotation {
  Centroid center;
  double semi_major = 0.5;
  double semi_minor = 0.5;
  /// Direction of the major axis, radians, y pointing down.
  double angle = 0.0;
  Source source = Source::sei;

  /// (u/a)^2 + (v/b)^2 for a point, in the ellipse frame; <= 1 means inside.
  [[nodiscard]] double normalized_radius2(double x, double y) const {
    const double dx = x - center.x, dy = y - center.y;
    const double c = std::cos(angle), s = std::sin(angle);
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    return (u * u) / (semi_major * semi_major) + (v * v) / (semi_minor * semi_minor);
  }
};

inline constexpr double kAxisFloor = 0.5;
inline constexpr double kAxisPad = 2.0;

/// Ellipse from the blob's second-moment covariance: semi-axes are
/// 2*sqrt(eigenvalue), floored at 0.5, plus a 2-pixel pad. If a pixel centre
/// still falls outside (long thin appendages), both axes are scaled up
/// together until every pixel is enclosed.
[[nodiscard]] inline EllipseAnnotation blob_to_ellipse(const Blob& blob) {
  const double n = static_cast<double>(blob.area);
  const double cxx = blob.moments.mu20 / n;
  const double cyy = blob.moments.mu02 / n;
  const double cxy = blob.moments.mu11 / n;
  const double mean = 0.5 * (cxx + cyy);
  const double spread = std::sqrt(0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy);
  const double l1 = std::max(mean + spread, 0.0);
  const double l2 = std::max(mean - spread, 0.0);

  EllipseAnnotation e;
  e.center = blob.centroid;
  e.angle = blob.orientation;
  e.source = blob.source;
  e.semi_major = std::max(2.0 * std::sqrt(l1), kAxisFloor) + kAxisPad;
  e.semi_minor = std::max(2.0 * std::sqrt(l2), kAxisFloor) + kAxisPad;

  double worst = 0.0;
  for (const Point p : blob.pixels) worst = std::max(worst, e.normalized_radius2(p.x, p.y));
  if (worst > 1.0) {
    // a hair over sqrt so the farthest pixel lands inside despite rounding
    const double scale = std::sqrt(worst) * (1.0 + 1e-12);
    e.semi_major *= scale;
    e.semi_minor *= scale;
  }
  return e;
}

[[nodiscard]] inline Rgb stroke_colour(Source s) { return s == Source::sei ? Rgb{255, 255, 0} : Rgb{255, 0, 0}; }

/// Strokes each outline onto a copy of img, sampling the curve at no more
/// than half a pixel of arc per step. Off-raster samples are dropped.
[[nodiscard]] inline ColorImage render_annotations(const ColorImage& img,
                                                   const std::vector<EllipseAnnotation>& annotations) {
  ColorImage out = img;
  for (const auto& e : annotations) {
    const double c = std::cos(e.angle), s = std::sin(e.angle);
    const int steps = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * e.semi_major / 0.5)));
    const Rgb colour = stroke_colour(e.source);
    for (int i = 0; i < steps; ++i) {
      const double t = 2.0 * std::numbers::pi * i / steps;
      const double u = e.semi_major * std::cos(t), v = e.semi_minor * std::sin(t);
      const Point p{static_cast<int>(std::lround(e.center.x + u * c - v * s)),
                    static_cast<int>(std::lround(e.center.y + u * s + v * c))};
      if (out.size().contains(p)) out[p] = colour;
    }
  }
  return out;
}

[[nodiscard]] inline BinaryMask candidate_mask(const std::vector<Blob>& candidates, Size dims) {
  BinaryMask mask(dims);
  for (const auto& b : candidates)
    for (const Point p : b.pixels) mask[p] = 1;
  return mask;
}

/// Pixels whose centres lie inside or on any of the ellipses.
[[nodiscard]] inline BinaryMask ellipse_interior_mask(const std::vector<EllipseAnnotation>& ellipses, Size dims) {
  BinaryMask mask(dims);
  for (const auto& e : ellipses) {
    const double r = e.semi_major;
    const int x0 = std::max(0, static_cast<int>(std::floor(e.center.x - r)));
    const int x1 = std::min(dims.width - 1, static_cast<int>(std::ceil(e.center.x + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(e.center.y - r)));
    const int y1 = std::min(dims.height - 1, static_cast<int>(std::ceil(e.center.y + r)));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (e.normalized_radius2(x, y) <= 1.0) mask(x, y) = 1;
  }
  return mask;
}

/// SEI candidates first, then SHI, each in id order: the fixed draw order.
[[nodiscard]] inline std::vector<Blob> order_for_drawing(std::vector<Blob> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Blob& a, const Blob& b) {
    if (a.source != b.source) return a.source == Source::sei;
    return a.id < b.id;
  });
  return candidates;
}

/// Number of blobs after merging SEI and SHI candidates: connected components
/// of the union of their pixels.
[[nodiscard]] inline std::size_t merged_blob_count(const std::vector<Blob>& candidates, Size dims) {
  if (candidates.empty()) return 0;
  return label_components(candidate_mask(candidates, dims)).size();
}

inline void write_ellipse_table(std::ostream& out, const std::vector<EllipseAnnotation>& ellipses) {
  out << "cx,cy,a,b,angle,source\n";
  char buf[160];
  for (const auto& e : ellipses) {
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,%.6f,%s\n", e.center.x, e.center.y, e.semi_major,
                  e.semi_minor, e.angle, std::string(to_string(e.source)).c_str());
    out << buf;
  }
}

}  // namespace retinoblob
