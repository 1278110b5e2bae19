#pragma once

// Pixel-level recall against ground truth, per cascade stage, and the
// per-image / mean report in CSV form.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "retinoblob/blob.hpp"
#include "retinoblob/cascade.hpp"
#include "retinoblob/config.hpp"
#include "retinoblob/error.hpp"
#include "retinoblob/image.hpp"
#include "retinoblob/postprocess.hpp"

namespace retinoblob {

struct GroundTruth {
  BinaryMask mask;
};

/// TP / (TP + FN). An empty ground truth scores 1.0.
[[nodiscard]] inline double recall(const BinaryMask& pred, const GroundTruth& gt) {
  if (pred.size() != gt.mask.size())
    throw DataError("recall: prediction " + std::to_string(pred.width()) + "x" + std::to_string(pred.height()) +
                    " vs ground truth " + std::to_string(gt.mask.width()) + "x" +
                    std::to_string(gt.mask.height()));
  std::size_t tp = 0, positives = 0;
  const auto& p = pred.pixels();
  const auto& g = gt.mask.pixels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i]) continue;
    ++positives;
    if (p[i]) ++tp;
  }
  return positives == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(positives);
}

struct StageResult {
  Stage stage = Stage::preprocessing;
  double blob_count = 0;  // fractional only on the mean row
  double recall = 0;
};

using StageRow = std::array<StageResult, 6>;

/// For every stage, recall of the union of that stage's survivors. The
/// post-processing row scores either the same pixels as the hue stage or, in
/// ellipse_interior mode, the filled ellipses around them.
[[nodiscard]] inline StageRow stage_recalls(const CascadeTrace& trace, const std::vector<Blob>& blobs,
                                            const GroundTruth& gt, Scoring scoring = Scoring::blob_pixels) {
  const Size dims = gt.mask.size();
  std::unordered_map<int, const Blob*> by_id;
  for (const auto& b : blobs) by_id.emplace(b.id, &b);

  StageRow row{};
  for (std::size_t i = 0; i < kAllStages.size(); ++i) {
    const auto& rec = trace.stages[i];
    BinaryMask mask(dims);
    std::vector<EllipseAnnotation> ellipses;
    for (int id : rec.ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw DataError("trace refers to unknown blob id " + std::to_string(id));
      for (const Point p : it->second->pixels) mask[p] = 1;
      if (rec.stage == Stage::postprocessing && scoring == Scoring::ellipse_interior)
        ellipses.push_back(blob_to_ellipse(*it->second));
    }
    if (!ellipses.empty()) {
      const auto filled = ellipse_interior_mask(ellipses, dims);
      for (std::size_t k = 0; k < mask.pixels().size(); ++k) mask.pixels()[k] |= filled.pixels()[k];
    }
    row[i] = {rec.stage, static_cast<double>(rec.count), recall(mask, gt)};
  }
  return row;
}

struct ImageReport {
  std::string name;
  StageRow stages{};
};

struct EvaluationReport {
  std::vector<ImageReport> images;

  /// Arithmetic mean of the image rows, accumulated in image order.
  [[nodiscard]] StageRow mean() const {
    StageRow m{};
    for (std::size_t s = 0; s < m.size(); ++s) m[s].stage = kAllStages[s];
    if (images.empty()) return m;
    for (const auto& img : images)
      for (std::size_t s = 0; s < m.size(); ++s) {
        m[s].blob_count += img.stages[s].blob_count;
        m[s].recall += img.stages[s].recall;
      }
    const double n = static_cast<double>(images.size());
    for (auto& r : m) {
      r.blob_count /= n;
      r.recall /= n;
    }
    return m;
  }
};

inline constexpr std::string_view kReportHeader = "image,stage,blob_count,recall_pct";

/// Image rows then the mean row, six stages each; recall as a percentage with
/// two decimals.
inline void write_report(const EvaluationReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  char buf[256];
  for (const auto& img : report.images)
    for (const auto& r : img.stages) {
      std::snprintf(buf, sizeof buf, "%s,%s,%.0f,%.2f\n", img.name.c_str(), std::string(to_string(r.stage)).c_str(),
                    r.blob_count, 100.0 * r.recall);
      out << buf;
    }
  for (const auto& r : report.mean()) {
    std::snprintf(buf, sizeof buf, "mean,%s,%.2f,%.2f\n", std::string(to_string(r.stage)).c_str(), r.blob_count,
                  100.0 * r.recall);
    out << buf;
  }
}

inline void write_report(const EvaluationReport& report, const std::filesystem::path& path) {
  std::ostringstream text;
  write_report(report, text);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text.str();
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

/// Parses a report written by write_report. Image rows become the report;
/// the mean rows are returned separately through `mean` when non-null.
[[nodiscard]] inline EvaluationReport read_report(std::istream& in, StageRow* mean = nullptr) {
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) throw DataError("report: missing or unexpected header");
  EvaluationReport report;
  StageRow mean_row{};
  std::size_t mean_rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw DataError("report: malformed row '" + line + "'");
    const auto stage = stage_from_string(cells[1]);
    if (!stage) throw DataError("report: unknown stage '" + cells[1] + "'");
    const StageResult r{*stage, std::stod(cells[2]), std::stod(cells[3]) / 100.0};
    const auto idx = static_cast<std::size_t>(*stage);
    if (cells[0] == "mean") {
      mean_row[idx] = r;
      ++mean_rows;
      continue;
    }
    if (report.images.empty() || report.images.back().name != cells[0]) report.images.push_back({cells[0], {}});
    report.images.back().stages[idx] = r;
  }
  if (mean && mean_rows) *mean = mean_row;
  return report;
}

}  // namespace retinoblob
