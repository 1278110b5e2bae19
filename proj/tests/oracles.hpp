#pragma once

// Straightforward reference implementations used as test oracles. Each is
// written independently of the library code it checks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "retinoblob/image.hpp"

namespace oracle {

using retinoblob::BinaryMask;
using retinoblob::GrayImage;
using retinoblob::Point;

/// Components as a set of sorted pixel lists, found by breadth-first flood fill.
inline std::set<std::vector<Point>> flood_fill_partition(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  std::set<std::vector<Point>> parts;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y) || seen[static_cast<std::size_t>(y) * w + x]) continue;
      std::vector<Point> comp;
      std::deque<Point> queue{{x, y}};
      seen[static_cast<std::size_t>(y) * w + x] = 1;
      while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        comp.push_back(p);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx, ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
            if (s || !mask(nx, ny)) continue;
            s = 1;
            queue.push_back({nx, ny});
          }
      }
      std::sort(comp.begin(), comp.end());
      parts.insert(std::move(comp));
    }
  return parts;
}

/// Exhaustive Otsu: the smallest t maximising w0*w1*(mu0-mu1)^2 in exact
/// rational arithmetic, classes {v <= t} and {v > t}. A histogram with a
/// single occupied bin returns that bin.
inline int otsu_exhaustive(const std::array<std::uint64_t, 256>& hist) {
  using boost::multiprecision::cpp_rational;
  cpp_rational total = 0, sum = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    sum += cpp_rational(hist[v]) * v;
  }
  int best_t = -1;
  cpp_rational best = -1;
  for (int t = 0; t < 256; ++t) {
    cpp_rational n0 = 0, s0 = 0;
    for (int v = 0; v <= t; ++v) {
      n0 += hist[v];
      s0 += cpp_rational(hist[v]) * v;
    }
    const cpp_rational n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const cpp_rational mu0 = s0 / n0, mu1 = (sum - s0) / n1;
    const cpp_rational var = (n0 / total) * (n1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best) {
      best = var;
      best_t = t;
    }
  }
  if (best_t < 0)
    for (int v = 0; v < 256; ++v)
      if (hist[v]) return v;
  return best_t;
}

/// Naive flat erosion / dilation over a disk, with out-of-raster samples
/// ignored (equivalent to padding with the operator's identity).
inline GrayImage disk_filter(const GrayImage& img, int r, bool dilate) {
  GrayImage out(img.size());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      int acc = dilate ? 0 : 255;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          if (dx * dx + dy * dy > r * r) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= img.width() || ny >= img.height()) continue;
          acc = dilate ? std::max<int>(acc, img(nx, ny)) : std::min<int>(acc, img(nx, ny));
        }
      out(x, y) = static_cast<std::uint8_t>(acc);
    }
  return out;
}

inline GrayImage random_gray(std::mt19937_64& rng, int w, int h) {
  GrayImage img(w, h);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

/// Smoothed random image: random blocks plus noise, so that morphology
/// sees plateaus as well as isolated extremes.
inline GrayImage random_textured(std::mt19937_64& rng, int w, int h) {
  GrayImage img(w, h);
  std::uniform_int_distribution<int> block(2, 9), level(0, 255), jitter(-12, 12), coin(0, 1);
  const int bs = block(rng);
  std::vector<int> levels(static_cast<std::size_t>((w / bs + 1) * (h / bs + 1)));
  for (auto& l : levels) l = level(rng);
  const bool noisy = coin(rng);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int v = levels[static_cast<std::size_t>((y / bs) * (w / bs + 1) + x / bs)];
      if (noisy) v += jitter(rng);
      img(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  return img;
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  BinaryMask m(w, h);
  std::bernoulli_distribution d(density);
  for (auto& v : m.pixels()) v = d(rng) ? 1 : 0;
  return m;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("retinoblob_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
