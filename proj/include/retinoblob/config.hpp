#pragma once

// Pipeline configuration and its flat `section.key = value` text format.
//
//   # comment
//   standard_size.width = 752
//   cascade.area_min = 5
//
// Keys that are absent keep their defaults, so an empty file reproduces the
// reference settings. Unknown keys and malformed values are errors.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "retinoblob/cascade.hpp"
#include "retinoblob/enhancement.hpp"
#include "retinoblob/error.hpp"
#include "retinoblob/synth.hpp"

namespace retinoblob {

enum class Scoring { blob_pixels, ellipse_interior };

[[nodiscard]] inline std::string_view to_string(Scoring s) {
  return s == Scoring::blob_pixels ? "blob_pixels" : "ellipse_interior";
}

[[nodiscard]] inline Scoring scoring_from_string(std::string_view s) {
  if (s == "blob_pixels") return Scoring::blob_pixels;
  if (s == "ellipse_interior") return Scoring::ellipse_interior;
  throw DataError("unknown scoring mode '" + std::string(s) + "' (expected blob_pixels or ellipse_interior)");
}

struct PipelineConfig {
  Size standard_size = kStandardSize;
  ClaheParams clahe{8, 8, 1.5};
  double stretch_low = 0.01;
  double stretch_high = 0.001;
  int se_radius = 12;
  int cleanup_radius = 1;
  CascadeConfig cascade;
  Scoring scoring = Scoring::blob_pixels;
  SynthSpec synth;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;

  void validate() const {
    if (standard_size.width < 1 || standard_size.height < 1) throw DataError("standard_size must be positive");
    clahe.validate();
    if (stretch_low < 0 || stretch_high < 0 || stretch_low >= 0.5 || stretch_high >= 0.5)
      throw DataError("stretch fractions must lie in [0, 0.5)");
    if (se_radius < 1) throw DataError("morphology.se_radius must be >= 1");
    if (cleanup_radius < 0) throw DataError("morphology.cleanup_radius must be >= 0");
    cascade.validate();
    synth.validate();
  }
};

namespace detail {

using FieldRef = std::variant<int*, double*, Scoring*>;

// Single source of truth for key names, used by both parse and serialize.
inline std::vector<std::pair<std::string, FieldRef>> config_fields(PipelineConfig& c) {
  auto& s = c.synth;
  return {
      {"standard_size.width", &c.standard_size.width},
      {"standard_size.height", &c.standard_size.height},
      {"clahe.tiles_x", &c.clahe.tiles_x},
      {"clahe.tiles_y", &c.clahe.tiles_y},
      {"clahe.clip_limit", &c.clahe.clip_limit},
      {"stretch.low_frac", &c.stretch_low},
      {"stretch.high_frac", &c.stretch_high},
      {"morphology.se_radius", &c.se_radius},
      {"morphology.cleanup_radius", &c.cleanup_radius},
      {"cascade.area_min", &c.cascade.area_min},
      {"cascade.area_max", &c.cascade.area_max},
      {"cascade.compact_sei_min", &c.cascade.compact_sei.min},
      {"cascade.compact_sei_max", &c.cascade.compact_sei.max},
      {"cascade.compact_shi_min", &c.cascade.compact_shi.min},
      {"cascade.compact_shi_max", &c.cascade.compact_shi.max},
      {"cascade.intensity_sei_min", &c.cascade.intensity_sei_min},
      {"cascade.intensity_shi_max", &c.cascade.intensity_shi_max},
      {"cascade.hue_sei_min", &c.cascade.hue_sei.min},
      {"cascade.hue_sei_max", &c.cascade.hue_sei.max},
      {"cascade.hue_shi_min", &c.cascade.hue_shi.min},
      {"cascade.hue_shi_max", &c.cascade.hue_shi.max},
      {"evaluation.scoring", &c.scoring},
      {"synth.width", &s.width},
      {"synth.height", &s.height},
      {"synth.exudates", &s.exudates},
      {"synth.haemorrhages", &s.haemorrhages},
      {"synth.vessels", &s.vessels},
      {"synth.noise_sigma", &s.noise_sigma},
      {"synth.exudate_area_min", &s.exudate_area_min},
      {"synth.exudate_area_max", &s.exudate_area_max},
      {"synth.haemorrhage_area_min", &s.haemorrhage_area_min},
      {"synth.haemorrhage_area_max", &s.haemorrhage_area_max},
      {"synth.background_hue", &s.background_hue},
      {"synth.background_saturation", &s.background_saturation},
      {"synth.background_value", &s.background_value},
      {"synth.illumination_gradient", &s.illumination_gradient},
      {"synth.exudate_hue_min", &s.exudate_hue_min},
      {"synth.exudate_hue_max", &s.exudate_hue_max},
      {"synth.exudate_saturation", &s.exudate_saturation},
      {"synth.exudate_value", &s.exudate_value},
      {"synth.haemorrhage_hue_min", &s.haemorrhage_hue_min},
      {"synth.haemorrhage_hue_max", &s.haemorrhage_hue_max},
      {"synth.haemorrhage_saturation", &s.haemorrhage_saturation},
      {"synth.haemorrhage_value", &s.haemorrhage_value},
      {"synth.vessel_hue", &s.vessel_hue},
      {"synth.vessel_value", &s.vessel_value},
      {"synth.vessel_width_min", &s.vessel_width_min},
      {"synth.vessel_width_max", &s.vessel_width_max},
      {"synth.lesion_margin", &s.lesion_margin},
  };
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text, const std::string& key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw DataError("invalid value '" + std::string(text) + "' for " + key);
  return value;
}

}  // namespace detail

/// Applies one `key = value` assignment. Throws DataError on unknown keys.
inline void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  const std::string k(detail::trim(key));
  const auto v = detail::trim(value);
  for (auto& [name, ref] : detail::config_fields(cfg)) {
    if (name != k) continue;
    std::visit(
        [&](auto* field) {
          using T = std::remove_pointer_t<decltype(field)>;
          if constexpr (std::is_same_v<T, Scoring>)
            *field = scoring_from_string(v);
          else
            *field = detail::parse_number<T>(v, k);
        },
        ref);
    return;
  }
  throw DataError("unknown config key '" + k + "'");
}

[[nodiscard]] inline PipelineConfig parse_config(std::string_view text, const std::string& origin = "<config>") {
  PipelineConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw DataError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    try {
      set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const DataError& e) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

[[nodiscard]] inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

/// Every key, one per line, in a form parse_config reads back exactly.
[[nodiscard]] inline std::string serialize_config(const PipelineConfig& cfg) {
  PipelineConfig copy = cfg;
  std::string out;
  for (auto& [name, ref] : detail::config_fields(copy)) {
    out += name + " = ";
    std::visit(
        [&](auto* field) {
          using T = std::remove_pointer_t<decltype(field)>;
          if constexpr (std::is_same_v<T, Scoring>) {
            out += to_string(*field);
          } else {
            char buf[64];
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *field);
            out.append(buf, end);
          }
        },
        ref);
    out += '\n';
  }
  return out;
}

}  // namespace retinoblob
