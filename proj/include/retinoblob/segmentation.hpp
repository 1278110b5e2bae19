#pragma once

// Pre-processing: colour frame -> enhanced gray, hue map, and the two binary
// candidate masks (SEI for bright lesions, SHI for dark lesions).

#include <array>
#include <cstdint>
#include <optional>

#include "retinoblob/config.hpp"
#include "retinoblob/enhancement.hpp"
#include "retinoblob/image.hpp"
#include "retinoblob/morphology.hpp"

namespace retinoblob {

namespace detail {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

// Compare a/b with c/d for non-negative numerators, positive denominators,
// exactly: a and c may be huge (squared sums), b and d are class-size products.
inline int compare_ratio(u128 a, u128 b, u128 c, u128 d) {
  const auto qa = a / b, qc = c / d;
  if (qa != qc) return qa < qc ? -1 : 1;
  const auto ra = a % b, rc = c % d;
  const auto lhs = ra * d, rhs = rc * b;
  if (lhs == rhs) return 0;
  return lhs < rhs ? -1 : 1;
}

}  // namespace detail

/// Otsu threshold of a 256-bin histogram: the level t maximising the
/// between-class variance of {v <= t} vs {v > t}, smallest t on ties.
/// With fewer than two occupied bins, returns the occupied level (0 if none),
/// so that `v > t` selects nothing.
[[nodiscard]] inline std::uint8_t otsu_threshold(const std::array<std::uint64_t, 256>& hist) {
  int occupied = 0, only = 0;
  std::uint64_t n = 0, sum = 0;
  for (int v = 0; v < 256; ++v) {
    const auto c = hist[static_cast<std::size_t>(v)];
    if (c) {
      ++occupied;
      only = v;
    }
    n += c;
    sum += c * static_cast<std::uint64_t>(v);
  }
  if (occupied < 2) return static_cast<std::uint8_t>(only);

  // n^2 * sigma_b^2 = (S0 * N - S * n0)^2 / (n0 * n1); compared exactly.
  int best = -1;
  detail::u128 best_num = 0, best_den = 1;
  std::uint64_t n0 = 0, s0 = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[static_cast<std::size_t>(t)];
    s0 += hist[static_cast<std::size_t>(t)] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = n - n0;
    if (n0 == 0 || n1 == 0) continue;
    const auto lhs = static_cast<detail::i128>(s0) * static_cast<detail::i128>(n);
    const auto rhs = static_cast<detail::i128>(sum) * static_cast<detail::i128>(n0);
    const auto diff = static_cast<detail::u128>(lhs > rhs ? lhs - rhs : rhs - lhs);
    const detail::u128 num = diff * diff;
    const detail::u128 den = static_cast<detail::u128>(n0) * n1;
    if (best < 0 || detail::compare_ratio(num, den, best_num, best_den) > 0) {
      best = t;
      best_num = num;
      best_den = den;
    }
  }
  return static_cast<std::uint8_t>(best);
}

[[nodiscard]] inline std::array<std::uint64_t, 256> histogram(const GrayImage& img) {
  std::array<std::uint64_t, 256> hist{};
  for (auto v : img.pixels()) ++hist[v];
  return hist;
}

[[nodiscard]] inline std::uint8_t otsu_threshold(const GrayImage& img) { return otsu_threshold(histogram(img)); }

/// Foreground where the value is strictly greater than the threshold.
[[nodiscard]] inline BinaryMask threshold_above(const GrayImage& img, std::uint8_t t) {
  BinaryMask out(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.pixels().begin(),
                 [t](std::uint8_t v) -> std::uint8_t { return v > t ? 1 : 0; });
  return out;
}

/// Every raster produced on the way to the two masks; the stage dumps read these.
struct PreprocessOutput {
  ColorImage resized;
  GrayImage gray;      // luma of the resized frame
  GrayImage enhanced;  // after CLAHE; the intensity reference for blobs
  HueMap hue;
  GrayImage bright;    // stretched tophat - bothat
  GrayImage dark;      // stretched bothat - tophat
  std::uint8_t bright_threshold = 0;
  std::uint8_t dark_threshold = 0;
  BinaryMask sei_raw;  // before close/open cleanup
  BinaryMask shi_raw;
  BinaryMask sei;  // cleaned; never overlaps shi
  BinaryMask shi;
};

[[nodiscard]] inline PreprocessOutput preprocess(const ColorImage& img, const PipelineConfig& cfg) {
  cfg.validate();
  PreprocessOutput out;
  out.resized = resize_to_standard(img, cfg.standard_size.width, cfg.standard_size.height);
  out.gray = to_gray(out.resized);
  out.hue = to_hue(out.resized);
  out.enhanced = clahe(out.gray, cfg.clahe);

  const auto se = disk(cfg.se_radius);
  const auto top = tophat(out.enhanced, se);
  const auto bottom = bothat(out.enhanced, se);
  out.bright = adjust_intensity(subtract_saturate(top, bottom), cfg.stretch_low, cfg.stretch_high);
  out.dark = adjust_intensity(subtract_saturate(bottom, top), cfg.stretch_low, cfg.stretch_high);

  out.bright_threshold = otsu_threshold(out.bright);
  out.dark_threshold = otsu_threshold(out.dark);
  out.sei_raw = threshold_above(out.bright, out.bright_threshold);
  out.shi_raw = threshold_above(out.dark, out.dark_threshold);

  const auto cleanup = disk(cfg.cleanup_radius);
  out.sei = open_mask(close_mask(out.sei_raw, cleanup), cleanup);
  out.shi = open_mask(close_mask(out.shi_raw, cleanup), cleanup);

  // The raw masks are disjoint, but closing can claim the same gap pixel for
  // both. A raw pixel stays with its own branch; any other contested pixel
  // goes to neither.
  auto& sei = out.sei.pixels();
  auto& shi = out.shi.pixels();
  for (std::size_t i = 0; i < sei.size(); ++i) {
    if (!sei[i] || !shi[i]) continue;
    sei[i] = out.sei_raw.pixels()[i];
    shi[i] = out.shi_raw.pixels()[i];
  }
  return out;
}

}  // namespace retinoblob
