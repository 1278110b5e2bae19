#pragma once

// End-to-end detection on one frame: pre-processing, blobbing, the cascade,
// merging and ellipse annotation.

#include <vector>

#include "retinoblob/blob.hpp"
#include "retinoblob/cascade.hpp"
#include "retinoblob/config.hpp"
#include "retinoblob/evaluation.hpp"
#include "retinoblob/postprocess.hpp"
#include "retinoblob/segmentation.hpp"

namespace retinoblob {

struct Detection {
  PreprocessOutput pre;
  std::vector<Blob> blobs;       // SEI blobs (ids 1..k) followed by SHI blobs
  std::vector<Blob> candidates;  // SEI first, then SHI
  CascadeTrace trace;
  std::vector<EllipseAnnotation> ellipses;
  ColorImage annotated;
};

[[nodiscard]] inline Detection detect(const ColorImage& img, const PipelineConfig& cfg) {
  Detection d;
  d.pre = preprocess(img, cfg);
  d.blobs = extract_blobs(d.pre.sei, Source::sei, d.pre.enhanced, d.pre.hue, 1);
  auto shi = extract_blobs(d.pre.shi, Source::shi, d.pre.enhanced, d.pre.hue, static_cast<int>(d.blobs.size()) + 1);
  d.blobs.insert(d.blobs.end(), std::make_move_iterator(shi.begin()), std::make_move_iterator(shi.end()));

  auto cascade = run_cascade(d.blobs, cfg.cascade);
  d.candidates = order_for_drawing(std::move(cascade.candidates));
  d.trace = std::move(cascade.trace);
  record_postprocessing(d.trace, merged_blob_count(d.candidates, d.pre.resized.size()));

  d.ellipses.reserve(d.candidates.size());
  for (const auto& b : d.candidates) d.ellipses.push_back(blob_to_ellipse(b));
  d.annotated = render_annotations(d.pre.resized, d.ellipses);
  return d;
}

}  // namespace retinoblob
