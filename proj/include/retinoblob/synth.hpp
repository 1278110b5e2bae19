#pragma once

// Synthetic fundus frames with exact lesion ground truth.
//
// A dark-orange circular field on black, a smooth illumination gradient,
// a tree of dark pseudo-vessels, bright yellow elliptical exudates and dark
// round haemorrhages / micro-aneurysms, plus per-channel Gaussian noise.
// Lesions never overlap each other or the vessels, and keep a margin from
// both so that no lesion merges with another structure after segmentation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "retinoblob/error.hpp"
#include "retinoblob/image.hpp"

namespace retinoblob {

struct SynthSpec {
  int width = 752;
  int height = 500;
  int exudates = 8;
  int haemorrhages = 8;
  int vessels = 7;
  double noise_sigma = 4.0;

  double exudate_area_min = 12;
  double exudate_area_max = 300;
  double haemorrhage_area_min = 5;
  double haemorrhage_area_max = 400;

  double background_hue = 0.10;
  double background_saturation = 0.75;
  double background_value = 150;
  /// Relative brightness swing of the illumination gradient across the field.
  double illumination_gradient = 0.25;

  double exudate_hue_min = 0.145;
  double exudate_hue_max = 0.16;
  double exudate_saturation = 0.7;
  double exudate_value = 245;

  double haemorrhage_hue_min = 0.075;
  double haemorrhage_hue_max = 0.105;
  double haemorrhage_saturation = 0.7;
  double haemorrhage_value = 70;

  double vessel_hue = 0.03;
  double vessel_value = 90;
  double vessel_width_min = 3;
  double vessel_width_max = 7;

  /// Minimum gap in pixels between a lesion and any vessel or other lesion.
  int lesion_margin = 8;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;

  void validate() const {
    if (width < 64 || height < 64) throw DataError("synth frame must be at least 64x64");
    if (exudates < 0 || haemorrhages < 0 || vessels < 0) throw DataError("synth counts must be >= 0");
    if (noise_sigma < 0) throw DataError("synth.noise_sigma must be >= 0");
    if (exudate_area_min < 1 || exudate_area_min > exudate_area_max || haemorrhage_area_min < 1 ||
        haemorrhage_area_min > haemorrhage_area_max)
      throw DataError("synth lesion area ranges are invalid");
    if (vessel_width_min < 1 || vessel_width_min > vessel_width_max)
      throw DataError("synth vessel width range is invalid");
  }
};

enum class LesionKind { exudate, haemorrhage };

struct PlantedLesion {
  LesionKind kind;
  Point centre;
  std::vector<Point> pixels;
};

struct SynthResult {
  ColorImage image;
  BinaryMask truth;
  BinaryMask vessels;
  std::vector<PlantedLesion> lesions;
};

/// HSV (all components in [0,1] except value in [0,255]) to RGB.
[[nodiscard]] inline std::array<double, 3> hsv_to_rgb(double hue, double sat, double value) {
  const double h6 = (hue - std::floor(hue)) * 6.0;
  const int sector = static_cast<int>(h6) % 6;
  const double f = h6 - std::floor(h6);
  const double p = value * (1 - sat);
  const double q = value * (1 - sat * f);
  const double t = value * (1 - sat * (1 - f));
  switch (sector) {
    case 0: return {value, t, p};
    case 1: return {q, value, p};
    case 2: return {p, value, t};
    case 3: return {p, q, value};
    case 4: return {t, p, value};
    default: return {value, p, q};
  }
}

namespace detail {

inline void stamp_disk(BinaryMask& mask, double cx, double cy, double r) {
  const int x0 = static_cast<int>(std::floor(cx - r)), x1 = static_cast<int>(std::ceil(cx + r));
  const int y0 = static_cast<int>(std::floor(cy - r)), y1 = static_cast<int>(std::ceil(cy + r));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (mask.size().contains({x, y}) && (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) mask(x, y) = 1;
}

// Pixels of an ellipse with integer centre, semi-axes a >= b and rotation theta.
inline std::vector<Point> ellipse_pixels(Point c, double a, double b, double theta) {
  std::vector<Point> out;
  const int reach = static_cast<int>(std::ceil(a)) + 1;
  const double ct = std::cos(theta), st = std::sin(theta);
  for (int dy = -reach; dy <= reach; ++dy)
    for (int dx = -reach; dx <= reach; ++dx) {
      const double u = dx * ct + dy * st;
      const double v = -dx * st + dy * ct;
      if ((u * u) / (a * a) + (v * v) / (b * b) <= 1.0) out.push_back({c.x + dx, c.y + dy});
    }
  return out;
}

inline std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace detail

/// Seed of the index-th frame of a batch (splitmix64 finaliser).
[[nodiscard]] constexpr std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic in (seed, spec).
[[nodiscard]] inline SynthResult synthesize_fundus(std::uint64_t seed, const SynthSpec& spec = {}) {
  spec.validate();
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const int w = spec.width, h = spec.height;
  const double cx = w / 2.0, cy = h / 2.0;
  const double radius = 0.48 * std::min(w, h);

  SynthResult out{ColorImage(w, h), BinaryMask(w, h), BinaryMask(w, h), {}};

  // illumination: linear ramp in a random direction plus radial fall-off
  const double ramp_angle = uniform(0, 2 * std::numbers::pi);
  const double rx = std::cos(ramp_angle), ry = std::sin(ramp_angle);
  std::vector<double> value(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
  auto inside = [&](double x, double y, double margin) {
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= (radius - margin) * (radius - margin);
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!inside(x, y, 0)) continue;
      const double nx = (x - cx) / radius, ny = (y - cy) / radius;
      const double ramp = 1.0 + 0.5 * spec.illumination_gradient * (nx * rx + ny * ry);
      const double falloff = 1.0 - 0.15 * (nx * nx + ny * ny);
      value[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] =
          spec.background_value * ramp * falloff;
    }

  // vessels: random walks fanning out from a disc point left or right of centre
  const double side = uniform(0, 1) < 0.5 ? -1.0 : 1.0;
  const double disc_x = cx + side * 0.55 * radius, disc_y = cy + uniform(-0.1, 0.1) * radius;
  for (int v = 0; v < spec.vessels; ++v) {
    double heading = (side < 0 ? 0.0 : std::numbers::pi) +
                     (v - (spec.vessels - 1) / 2.0) * (1.6 * std::numbers::pi / std::max(spec.vessels, 1));
    double x = disc_x, y = disc_y;
    double width = uniform(spec.vessel_width_min, spec.vessel_width_max);
    const double shrink = uniform(0.985, 0.998);
    for (int step = 0; step < 4000 && inside(x, y, 2); ++step) {
      detail::stamp_disk(out.vessels, x, y, width / 2.0);
      heading += uniform(-0.03, 0.03);
      x += 0.5 * std::cos(heading);
      y += 0.5 * std::sin(heading);
      if (step % 20 == 19) width = std::max(spec.vessel_width_min, width * shrink);
    }
  }

  // keep-out map: vessels grown by the margin, then each placed lesion likewise
  BinaryMask blocked(w, h);
  auto block_around = [&](const std::vector<Point>& pts) {
    const int m = spec.lesion_margin;
    for (const Point p : pts)
      for (int dy = -m; dy <= m; ++dy)
        for (int dx = -m; dx <= m; ++dx)
          if (dx * dx + dy * dy <= m * m && blocked.size().contains({p.x + dx, p.y + dy}))
            blocked(p.x + dx, p.y + dy) = 1;
  };
  {
    std::vector<Point> vessel_pixels;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (out.vessels(x, y)) vessel_pixels.push_back({x, y});
    block_around(vessel_pixels);
  }

  auto place = [&](LesionKind kind) {
    const bool ex = kind == LesionKind::exudate;
    const double amin = ex ? spec.exudate_area_min : spec.haemorrhage_area_min;
    const double amax = ex ? spec.exudate_area_max : spec.haemorrhage_area_max;
    for (int attempt = 0; attempt < 2000; ++attempt) {
      // log-uniform area so small lesions are as common as large ones
      const double area = std::exp(uniform(std::log(amin), std::log(amax)));
      const double aspect = ex ? uniform(1.0, 1.8) : 1.0;
      const double b = std::sqrt(area / (std::numbers::pi * aspect));
      const double a = b * aspect;
      const double theta = uniform(0, std::numbers::pi);
      const Point c{static_cast<int>(uniform(cx - radius, cx + radius)),
                    static_cast<int>(uniform(cy - radius, cy + radius))};
      auto pixels = detail::ellipse_pixels(c, a, b, theta);
      const bool ok = !pixels.empty() && std::all_of(pixels.begin(), pixels.end(), [&](Point p) {
        return out.truth.size().contains(p) && inside(p.x, p.y, 20) && !blocked[p];
      });
      if (!ok) continue;
      block_around(pixels);
      for (const Point p : pixels) out.truth[p] = 1;
      out.lesions.push_back({kind, c, std::move(pixels)});
      return;
    }
  };
  for (int i = 0; i < spec.exudates; ++i) place(LesionKind::exudate);
  for (int i = 0; i < spec.haemorrhages; ++i) place(LesionKind::haemorrhage);

  std::vector<double> lesion_hue(out.lesions.size());
  for (std::size_t i = 0; i < out.lesions.size(); ++i)
    lesion_hue[i] = out.lesions[i].kind == LesionKind::exudate
                        ? uniform(spec.exudate_hue_min, spec.exudate_hue_max)
                        : uniform(spec.haemorrhage_hue_min, spec.haemorrhage_hue_max);

  // paint background and vessels, then lesions, then noise
  std::vector<std::array<double, 3>> rgb(value.size(), {0.0, 0.0, 0.0});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
      if (!inside(x, y, 0)) continue;
      const double shade = value[i] / spec.background_value;
      rgb[i] = out.vessels(x, y)
                   ? hsv_to_rgb(spec.vessel_hue, spec.background_saturation, spec.vessel_value * shade)
                   : hsv_to_rgb(spec.background_hue, spec.background_saturation, value[i]);
    }
  for (std::size_t l = 0; l < out.lesions.size(); ++l) {
    const bool ex = out.lesions[l].kind == LesionKind::exudate;
    const auto colour = ex ? hsv_to_rgb(lesion_hue[l], spec.exudate_saturation, spec.exudate_value)
                           : hsv_to_rgb(lesion_hue[l], spec.haemorrhage_saturation, spec.haemorrhage_value);
    for (const Point p : out.lesions[l].pixels)
      rgb[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(p.x)] = colour;
  }
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    auto& px = out.image.pixels()[i];
    if (spec.noise_sigma > 0) {
      px = {detail::to_byte(rgb[i][0] + noise(rng)), detail::to_byte(rgb[i][1] + noise(rng)),
            detail::to_byte(rgb[i][2] + noise(rng))};
    } else {
      px = {detail::to_byte(rgb[i][0]), detail::to_byte(rgb[i][1]), detail::to_byte(rgb[i][2])};
    }
  }
  return out;
}

}  // namespace retinoblob
