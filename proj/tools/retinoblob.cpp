// retinoblob: lesion detection, batch evaluation and synthetic data.
//
//   retinoblob detect <image> [--config <file>] --out <dir> [--dump-stages] [--gt <mask>]
//   retinoblob eval <img_dir> <gt_dir> [--config <file>] --out <csv>
//                   [--scoring blob_pixels|ellipse_interior] [--jobs N] [--annotated <dir>]
//   retinoblob synth --seed <n> --count <n> --out <dir>
//
// Every subcommand also accepts repeated `--set key=value` config overrides.

#include <CLI11.hpp>

#include <iostream>

#include "retinoblob/commands.hpp"

namespace {

void add_config_options(CLI::App* cmd, retinoblob::ConfigSource& src, std::string& file) {
  cmd->add_option("--config", file, "Pipeline config file (key = value lines)");
  cmd->add_option("--set", src.overrides, "Config override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace retinoblob;
  CLI::App app{"Detect exudates, haemorrhages and micro-aneurysms in fundus images"};
  app.require_subcommand(1);

  DetectOptions detect_opt;
  std::string detect_cfg, detect_gt;
  auto* detect = app.add_subcommand("detect", "Run the pipeline on one image");
  detect->add_option("image", detect_opt.image, "Input image (PNG, PPM or PGM)")->required();
  detect->add_option("--out", detect_opt.out_dir, "Output directory")->required();
  detect->add_flag("--dump-stages", detect_opt.dump_stages, "Also write the intermediate rasters");
  detect->add_option("--gt", detect_gt, "Ground-truth mask; adds per-stage recall to stages.csv");
  add_config_options(detect, detect_opt.config, detect_cfg);

  EvalOptions eval_opt;
  std::string eval_cfg, eval_scoring, eval_annotated;
  auto* eval = app.add_subcommand("eval", "Evaluate a directory of images against ground truth");
  eval->add_option("img_dir", eval_opt.image_dir, "Directory of images")->required();
  eval->add_option("gt_dir", eval_opt.gt_dir, "Directory of ground-truth masks")->required();
  eval->add_option("--out", eval_opt.out_csv, "Report CSV path")->required();
  eval->add_option("--scoring", eval_scoring, "blob_pixels or ellipse_interior")
      ->check(CLI::IsMember({"blob_pixels", "ellipse_interior"}));
  eval->add_option("--jobs", eval_opt.jobs, "Images processed concurrently")->check(CLI::PositiveNumber);
  eval->add_option("--annotated", eval_annotated, "Directory for annotated images");
  add_config_options(eval, eval_opt.config, eval_cfg);

  SynthOptions synth_opt;
  std::string synth_cfg;
  auto* synth = app.add_subcommand("synth", "Generate synthetic fundus images with ground truth");
  synth->add_option("--seed", synth_opt.seed, "Batch seed")->required();
  synth->add_option("--count", synth_opt.count, "Number of image pairs")->required();
  synth->add_option("--out", synth_opt.out_dir, "Output directory")->required();
  add_config_options(synth, synth_opt.config, synth_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_code::ok : exit_code::usage;
  }

  if (detect->parsed()) {
    if (!detect_cfg.empty()) detect_opt.config.file = detect_cfg;
    if (!detect_gt.empty()) detect_opt.ground_truth = detect_gt;
    return cmd_detect(detect_opt, std::cout, std::cerr);
  }
  if (eval->parsed()) {
    if (!eval_cfg.empty()) eval_opt.config.file = eval_cfg;
    if (!eval_annotated.empty()) eval_opt.annotated_dir = eval_annotated;
    try {
      if (!eval_scoring.empty()) eval_opt.scoring = scoring_from_string(eval_scoring);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return exit_code::usage;
    }
    return cmd_eval(eval_opt, std::cout, std::cerr);
  }
  if (!synth_cfg.empty()) synth_opt.config.file = synth_cfg;
  return cmd_synth(synth_opt, std::cout, std::cerr);
}
