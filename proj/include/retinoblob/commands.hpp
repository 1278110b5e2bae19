#pragma once

// The detect / eval / synth commands behind the retinoblob binary. Each
// returns a process exit status and reports failures on `err`.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "retinoblob/config.hpp"
#include "retinoblob/evaluation.hpp"
#include "retinoblob/io.hpp"
#include "retinoblob/pipeline.hpp"
#include "retinoblob/synth.hpp"

namespace retinoblob {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int data = 2;
inline constexpr int io = 3;
}  // namespace exit_code

struct ConfigSource {
  std::optional<std::filesystem::path> file;
  /// `key=value` assignments applied after the file.
  std::vector<std::string> overrides;
};

struct DetectOptions {
  std::filesystem::path image;
  ConfigSource config;
  std::filesystem::path out_dir;
  bool dump_stages = false;
  std::optional<std::filesystem::path> ground_truth;
};

struct EvalOptions {
  std::filesystem::path image_dir;
  std::filesystem::path gt_dir;
  ConfigSource config;
  std::filesystem::path out_csv;
  std::optional<Scoring> scoring;
  int jobs = 1;
  std::optional<std::filesystem::path> annotated_dir;
};

struct SynthOptions {
  std::uint64_t seed = 42;
  int count = 10;
  ConfigSource config;
  std::filesystem::path out_dir;
};

namespace detail {

// Runs fn, translating library exceptions into an exit status and a
// diagnostic that names the stage.
template <typename Fn>
int guarded(std::ostream& err, const char* stage, Fn&& fn) {
  try {
    fn();
    return exit_code::ok;
  } catch (const IoError& e) {
    err << "error [" << stage << "]: " << e.what() << '\n';
    return exit_code::io;
  } catch (const Error& e) {
    err << "error [" << stage << "]: " << e.what() << '\n';
    return exit_code::data;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [" << stage << "]: " << e.what() << '\n';
    return exit_code::io;
  }
}

inline PipelineConfig resolve_config(const ConfigSource& src) {
  PipelineConfig cfg = src.file ? load_config(*src.file) : PipelineConfig{};
  for (const auto& kv : src.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw DataError("override '" + kv + "' is not of the form key=value");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory: " + dir.string());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

inline bool is_image_file(const std::filesystem::path& p) {
  const auto ext = lower_extension(p);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

inline std::string stages_csv(const std::string& image, const CascadeTrace& trace,
                              const std::optional<StageRow>& recalls) {
  std::string out = "image,stage,blob_count,recall\n";
  char buf[200];
  for (std::size_t i = 0; i < trace.stages.size(); ++i) {
    const auto& rec = trace.stages[i];
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,", image.c_str(), std::string(to_string(rec.stage)).c_str(), rec.count);
    out += buf;
    if (recalls) {
      std::snprintf(buf, sizeof buf, "%.6f", (*recalls)[i].recall);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

struct ImagePair {
  std::filesystem::path image;
  std::filesystem::path truth;
};

// Pairs every image in image_dir with a same-named mask in gt_dir, or with
// gt_<rest> for an image named img_<rest> (the layout `synth` writes).
inline std::vector<ImagePair> pair_images(const std::filesystem::path& image_dir,
                                          const std::filesystem::path& gt_dir) {
  if (!std::filesystem::is_directory(image_dir)) throw IoError("not a directory: " + image_dir.string());
  if (!std::filesystem::is_directory(gt_dir)) throw IoError("not a directory: " + gt_dir.string());
  const bool shared = std::filesystem::equivalent(image_dir, gt_dir);
  std::vector<std::filesystem::path> images;
  for (const auto& entry : std::filesystem::directory_iterator(image_dir)) {
    if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
    const auto name = entry.path().filename().string();
    if (shared && name.starts_with("gt_")) continue;
    images.push_back(entry.path());
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) throw DataError("no images found in " + image_dir.string());

  std::vector<ImagePair> pairs;
  for (const auto& img : images) {
    const auto name = img.filename().string();
    std::filesystem::path truth = gt_dir / name;
    if (shared || !std::filesystem::exists(truth)) {
      if (name.starts_with("img_")) truth = gt_dir / ("gt_" + name.substr(4));
    }
    if (shared && !name.starts_with("img_")) truth.clear();
    if (truth.empty() || !std::filesystem::exists(truth))
      throw DataError("no ground-truth mask for " + img.string() + " in " + gt_dir.string());
    pairs.push_back({img, truth});
  }
  return pairs;
}

}  // namespace detail

inline int cmd_detect(const DetectOptions& opt, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  ColorImage image;
  std::optional<GroundTruth> truth;
  Detection det;
  if (int rc = detail::guarded(err, "config", [&] { cfg = detail::resolve_config(opt.config); })) return rc;
  if (int rc = detail::guarded(err, "load", [&] {
        image = load_color(opt.image);
        if (opt.ground_truth) truth = GroundTruth{load_mask(*opt.ground_truth)};
      }))
    return rc;
  if (int rc = detail::guarded(err, "pipeline", [&] { det = detect(image, cfg); })) return rc;
  return detail::guarded(err, "write", [&] {
    detail::ensure_dir(opt.out_dir);
    save_color(det.annotated, opt.out_dir / "annotated.png");
    std::ostringstream candidates, ellipses;
    write_blob_table(candidates, det.candidates);
    write_ellipse_table(ellipses, det.ellipses);
    detail::write_text(opt.out_dir / "candidates.csv", candidates.str());
    detail::write_text(opt.out_dir / "annotations.csv", ellipses.str());
    std::optional<StageRow> recalls;
    if (truth) recalls = stage_recalls(det.trace, det.blobs, *truth, cfg.scoring);
    detail::write_text(opt.out_dir / "stages.csv", detail::stages_csv(opt.image.stem().string(), det.trace, recalls));
    if (opt.dump_stages) {
      save_gray(det.pre.gray, opt.out_dir / "01_gray.png");
      save_gray(det.pre.enhanced, opt.out_dir / "02_clahe.png");
      save_gray(det.pre.bright, opt.out_dir / "03_bright.png");
      save_mask(det.pre.sei, opt.out_dir / "04_sei.png");
      save_gray(det.pre.dark, opt.out_dir / "05_dark.png");
      save_mask(det.pre.shi, opt.out_dir / "06_shi.png");
    }
    out << det.candidates.size() << " candidate blobs (" << det.blobs.size() << " before the cascade)\n";
  });
}

inline int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  std::vector<detail::ImagePair> pairs;
  if (int rc = detail::guarded(err, "config", [&] {
        cfg = detail::resolve_config(opt.config);
        if (opt.scoring) cfg.scoring = *opt.scoring;
      }))
    return rc;
  if (int rc = detail::guarded(err, "load", [&] {
        pairs = detail::pair_images(opt.image_dir, opt.gt_dir);
        if (opt.annotated_dir) detail::ensure_dir(*opt.annotated_dir);
      }))
    return rc;

  // Each worker owns whole images; results land in their slot so the
  // report is independent of scheduling.
  struct Slot {
    ImageReport report;
    std::string error;
    int code = exit_code::ok;
  };
  std::vector<Slot> slots(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      auto& slot = slots[i];
      std::ostringstream diag;
      slot.code = detail::guarded(diag, "evaluate", [&] {
        const auto& pair = pairs[i];
        const auto image = load_color(pair.image);
        GroundTruth truth{load_mask(pair.truth)};
        if (truth.mask.size() != cfg.standard_size)
          throw DataError("ground truth " + pair.truth.string() + " is " + std::to_string(truth.mask.width()) + "x" +
                          std::to_string(truth.mask.height()) + ", expected the standard size " +
                          std::to_string(cfg.standard_size.width) + "x" + std::to_string(cfg.standard_size.height) +
                          " for " + pair.image.string());
        const auto det = detect(image, cfg);
        slot.report = {pair.image.stem().string(), stage_recalls(det.trace, det.blobs, truth, cfg.scoring)};
        if (opt.annotated_dir) save_color(det.annotated, *opt.annotated_dir / (pair.image.stem().string() + ".png"));
      });
      slot.error = diag.str();
    }
  };
  const int jobs = std::clamp(opt.jobs, 1, static_cast<int>(std::max<std::size_t>(pairs.size(), 1)));
  std::vector<std::jthread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();

  EvaluationReport report;
  for (auto& slot : slots) {
    if (slot.code != exit_code::ok) {
      err << slot.error;
      return slot.code;
    }
    report.images.push_back(std::move(slot.report));
  }
  return detail::guarded(err, "write", [&] {
    if (opt.out_csv.has_parent_path()) detail::ensure_dir(opt.out_csv.parent_path());
    write_report(report, opt.out_csv);
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean final recall: %.2f%% over %zu images\n",
                  100.0 * report.mean()[5].recall, report.images.size());
    out << buf;
  });
}

inline int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  if (int rc = detail::guarded(err, "config", [&] {
        cfg = detail::resolve_config(opt.config);
        if (opt.count < 1) throw DataError("--count must be >= 1");
      }))
    return rc;
  return detail::guarded(err, "write", [&] {
    detail::ensure_dir(opt.out_dir);
    for (int i = 0; i < opt.count; ++i) {
      const auto frame = synthesize_fundus(batch_seed(opt.seed, static_cast<std::uint64_t>(i)), cfg.synth);
      char name[32];
      std::snprintf(name, sizeof name, "%03d.png", i);
      save_color(frame.image, opt.out_dir / (std::string("img_") + name));
      save_mask(frame.truth, opt.out_dir / (std::string("gt_") + name));
    }
    out << "wrote " << opt.count << " image/ground-truth pairs to " << opt.out_dir.string() << '\n';
  });
}

}  // namespace retinoblob
