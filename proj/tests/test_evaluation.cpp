#include <gtest/gtest.h>

#include <sstream>

#include "retinoblob/evaluation.hpp"

using namespace retinoblob;

namespace {

BinaryMask mask_with(Size dims, const std::vector<Point>& on) {
  BinaryMask m(dims);
  for (const Point p : on) m[p] = 1;
  return m;
}

Blob blob_at(int id, Source s, std::vector<Point> px, double comp = 1.0) {
  Blob b;
  b.id = id;
  b.source = s;
  b.pixels = std::move(px);
  b.area = 50;
  b.compactness = comp;
  b.intensity_mid = s == Source::sei ? 150 : 50;
  b.mean_hue = s == Source::sei ? 0.14 : 0.1;
  b.centroid = {static_cast<double>(b.pixels[0].x), static_cast<double>(b.pixels[0].y)};
  return b;
}

}  // namespace

TEST(Recall, HandCases) {
  const Size dims{20, 20};
  std::vector<Point> gt_px;
  for (int i = 0; i < 10; ++i) gt_px.push_back({i, 0});
  const GroundTruth gt{mask_with(dims, gt_px)};
  EXPECT_EQ(recall(gt.mask, gt), 1.0);
  EXPECT_EQ(recall(BinaryMask(dims), gt), 0.0);
  std::vector<Point> pred(gt_px.begin(), gt_px.begin() + 5);
  for (int i = 0; i < 100; ++i) pred.push_back({i % 20, 5 + i / 20});
  EXPECT_EQ(recall(mask_with(dims, pred), gt), 0.5);
  EXPECT_EQ(recall(BinaryMask(dims, 1), GroundTruth{BinaryMask(dims)}), 1.0);
  EXPECT_THROW((void)recall(BinaryMask(3, 3), gt), DataError);
}

TEST(StageRecalls, AllCandidatesPerfect) {
  const Size dims{30, 30};
  const auto a = blob_at(1, Source::sei, {{2, 2}, {3, 2}});
  const auto b = blob_at(2, Source::shi, {{20, 20}});
  const auto res = run_cascade({a, b}, CascadeConfig{});
  const GroundTruth gt{mask_with(dims, {{2, 2}, {3, 2}, {20, 20}})};
  for (const auto& r : stage_recalls(res.trace, {a, b}, gt)) EXPECT_EQ(r.recall, 1.0);
}

TEST(StageRecalls, DropsAtRejectingStageAndStaysDown) {
  const Size dims{30, 30};
  const auto hit = blob_at(1, Source::sei, {{2, 2}}, 20.0);  // fails compactness
  const auto miss = blob_at(2, Source::sei, {{10, 10}});
  const std::vector<Blob> blobs{hit, miss};
  const auto res = run_cascade(blobs, CascadeConfig{});
  const auto row = stage_recalls(res.trace, blobs, GroundTruth{mask_with(dims, {{2, 2}})});
  EXPECT_EQ(row[0].recall, 1.0);
  EXPECT_EQ(row[1].recall, 1.0);
  for (std::size_t i = 2; i < row.size(); ++i) EXPECT_EQ(row[i].recall, 0.0) << i;
}

TEST(StageRecalls, EllipseScoringOnlyWidensFinalStage) {
  const Size dims{30, 30};
  const auto b = blob_at(1, Source::sei, {{10, 10}});
  const auto res = run_cascade({b}, CascadeConfig{});
  const GroundTruth gt{mask_with(dims, {{10, 10}, {11, 10}})};
  const auto plain = stage_recalls(res.trace, {b}, gt, Scoring::blob_pixels);
  const auto filled = stage_recalls(res.trace, {b}, gt, Scoring::ellipse_interior);
  EXPECT_EQ(plain[5].recall, 0.5);
  EXPECT_EQ(filled[4].recall, 0.5);
  EXPECT_EQ(filled[5].recall, 1.0);
}

TEST(Report, SingleImageMeanEqualsImage) {
  EvaluationReport rep;
  StageRow row{};
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = {kAllStages[i], 10.0 - i, 0.5 + 0.01 * i};
  rep.images.push_back({"one", row});
  std::ostringstream out;
  write_report(rep, out);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 13);
  const auto mean = rep.mean();
  for (std::size_t i = 0; i < row.size(); ++i) {
    EXPECT_DOUBLE_EQ(mean[i].recall, row[i].recall);
    EXPECT_DOUBLE_EQ(mean[i].blob_count, row[i].blob_count);
  }
}

TEST(Report, RoundTripAndRowAccounting) {
  EvaluationReport rep;
  for (int k = 0; k < 10; ++k) {
    StageRow row{};
    for (std::size_t i = 0; i < row.size(); ++i)
      row[i] = {kAllStages[i], static_cast<double>(100 - 7 * i - k), (k * 6 + i) / 100.0};
    rep.images.push_back({"img_" + std::to_string(k), row});
  }
  std::ostringstream out;
  write_report(rep, out);
  std::istringstream in(out.str());
  StageRow mean{};
  const auto back = read_report(in, &mean);
  ASSERT_EQ(back.images.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_EQ(back.images[k].name, rep.images[k].name);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_EQ(back.images[k].stages[i].blob_count, rep.images[k].stages[i].blob_count);
      EXPECT_NEAR(back.images[k].stages[i].recall, rep.images[k].stages[i].recall, 5e-5);
    }
  }
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(mean[i].recall, rep.mean()[i].recall, 5e-5);
  std::size_t data_rows = 0;
  for (char c : out.str()) data_rows += c == '\n';
  EXPECT_EQ(data_rows - 1, 66u);
}

TEST(Report, RejectsGarbage) {
  std::istringstream bad_header("nope\n");
  EXPECT_THROW((void)read_report(bad_header), DataError);
  std::istringstream bad_stage(std::string(kReportHeader) + "\nx,warp,1,2\n");
  EXPECT_THROW((void)read_report(bad_stage), DataError);
}
