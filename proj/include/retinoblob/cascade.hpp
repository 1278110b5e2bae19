#pragma once

// The four-stage cascading decision tree over measured blobs:
// area -> compactness -> intensity -> hue, with a per-stage audit trail.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retinoblob/blob.hpp"
#include "retinoblob/error.hpp"

namespace retinoblob {

/// Closed keep-interval [min, max].
struct Interval {
  double min = 0.0;
  double max = 0.0;
  [[nodiscard]] bool contains(double v) const { return min <= v && v <= max; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct CascadeConfig {
  double area_min = 5;
  double area_max = 5000;
  Interval compact_sei{0.55, 9.0};
  Interval compact_shi{0.7, 4.0};
  double intensity_sei_min = 90;
  double intensity_shi_max = 200;
  Interval hue_sei{0.125, 0.165};
  Interval hue_shi{0.06, 0.125};

  friend bool operator==(const CascadeConfig&, const CascadeConfig&) = default;

  void validate() const {
    if (area_min < 1) throw DataError("cascade.area_min must be >= 1");
    if (area_min > area_max) throw DataError("cascade area interval is empty");
    for (const Interval* i : {&compact_sei, &compact_shi, &hue_sei, &hue_shi})
      if (i->min > i->max) throw DataError("cascade interval has min > max");
  }
};

enum class Stage { preprocessing, area, compactness, intensity, hue, postprocessing };

inline constexpr std::array<Stage, 6> kAllStages = {Stage::preprocessing, Stage::area,
                                                    Stage::compactness, Stage::intensity,
                                                    Stage::hue, Stage::postprocessing};
/// Stages that can reject a blob, in evaluation order.
inline constexpr std::array<Stage, 4> kFilterStages = {Stage::area, Stage::compactness,
                                                       Stage::intensity, Stage::hue};

[[nodiscard]] inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::preprocessing: return "preprocessing";
    case Stage::area: return "area";
    case Stage::compactness: return "compactness";
    case Stage::intensity: return "intensity";
    case Stage::hue: return "hue";
    case Stage::postprocessing: return "postprocessing";
  }
  return "?";
}

[[nodiscard]] inline std::optional<Stage> stage_from_string(std::string_view name) {
  for (Stage s : kAllStages)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

/// Keep-predicate of one filter stage. Boundary values are kept.
[[nodiscard]] inline bool passes(Stage stage, const Blob& b, const CascadeConfig& cfg) {
  const bool sei = b.source == Source::sei;
  switch (stage) {
    case Stage::area: {
      const auto a = static_cast<double>(b.area);
      return cfg.area_min <= a && a <= cfg.area_max;
    }
    case Stage::compactness:
      return (sei ? cfg.compact_sei : cfg.compact_shi).contains(b.compactness);
    case Stage::intensity:
      return sei ? b.intensity_mid >= cfg.intensity_sei_min : b.intensity_mid <= cfg.intensity_shi_max;
    case Stage::hue:
      return b.mean_hue.has_value() && (sei ? cfg.hue_sei : cfg.hue_shi).contains(*b.mean_hue);
    default:
      return true;
  }
}

struct StageRecord {
  Stage stage;
  /// Surviving blob count. Equals ids.size() except after post-processing,
  /// where touching candidates are merged.
  std::size_t count = 0;
  std::vector<int> ids;
};

struct CascadeTrace {
  std::array<StageRecord, 6> stages{};
  /// (blob id, rejecting stage) sorted by id; nullopt marks a candidate.
  std::vector<std::pair<int, std::optional<Stage>>> outcomes;

  CascadeTrace() {
    for (std::size_t i = 0; i < kAllStages.size(); ++i) stages[i].stage = kAllStages[i];
  }

  [[nodiscard]] const StageRecord& at(Stage s) const { return stages[static_cast<std::size_t>(s)]; }
  [[nodiscard]] StageRecord& at(Stage s) { return stages[static_cast<std::size_t>(s)]; }

  [[nodiscard]] std::optional<Stage> outcome(int id) const {
    const auto it = std::lower_bound(outcomes.begin(), outcomes.end(), id,
                                     [](const auto& rec, int key) { return rec.first < key; });
    if (it == outcomes.end() || it->first != id) throw DataError("no blob with id " + std::to_string(id));
    return it->second;
  }
};

struct CascadeResult {
  std::vector<Blob> candidates;
  CascadeTrace trace;
};

/// Runs every blob through the filter stages in order; a rejected blob is not
/// examined further. Candidates keep their input order. The post-processing
/// record starts as a copy of the hue stage (see record_postprocessing).
[[nodiscard]] inline CascadeResult run_cascade(const std::vector<Blob>& blobs, const CascadeConfig& cfg) {
  cfg.validate();
  CascadeResult result;
  auto& trace = result.trace;
  for (const auto& b : blobs) {
    trace.at(Stage::preprocessing).ids.push_back(b.id);
    std::optional<Stage> rejected;
    for (Stage s : kFilterStages) {
      if (!passes(s, b, cfg)) {
        rejected = s;
        break;
      }
      trace.at(s).ids.push_back(b.id);
    }
    trace.outcomes.emplace_back(b.id, rejected);
    if (!rejected) result.candidates.push_back(b);
  }
  trace.at(Stage::postprocessing).ids = trace.at(Stage::hue).ids;
  for (auto& rec : trace.stages) {
    std::sort(rec.ids.begin(), rec.ids.end());
    rec.count = rec.ids.size();
  }
  std::sort(trace.outcomes.begin(), trace.outcomes.end());
  return result;
}

inline void record_postprocessing(CascadeTrace& trace, std::size_t merged_count) {
  auto& rec = trace.at(Stage::postprocessing);
  if (merged_count > rec.ids.size())
    throw DataError("post-processing cannot increase the number of blobs");
  rec.count = merged_count;
}

/// (stage, surviving count) in pipeline order.
[[nodiscard]] inline std::vector<std::pair<Stage, std::size_t>> stage_survivor_counts(const CascadeTrace& trace) {
  std::vector<std::pair<Stage, std::size_t>> out;
  for (const auto& rec : trace.stages) out.emplace_back(rec.stage, rec.count);
  return out;
}

}  // namespace retinoblob
