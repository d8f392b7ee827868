#include <gtest/gtest.h>

#include <random>

#include "oet/error.hpp"
#include "oet/metrics.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace oet {
namespace {

TEST(Iou, Examples) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, {20, 20, 5, 5}), 0.0);
  EXPECT_DOUBLE_EQ(iou(a, {5, 0, 10, 10}), 1.0 / 3.0);
}

TEST(Iou, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(0, 50), size(1, 30);
  for (int i = 0; i < 1000; ++i) {
    const BoundingBox a{pos(rng), pos(rng), size(rng), size(rng)};
    const BoundingBox b{pos(rng), pos(rng), size(rng), size(rng)};
    EXPECT_EQ(iou(a, b), iou(b, a));
    EXPECT_GE(iou(a, b), 0.0);
    EXPECT_LE(iou(a, b), 1.0);
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  }
}

TEST(CenterError, Examples) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_EQ(center_error(a, a), 0.0);
  const BoundingBox b{3, 4, 10, 10};
  EXPECT_EQ(center_error(a, b), 5.0);
  EXPECT_EQ(center_error(b, a), 5.0);
}

TEST(Evaluate, Examples) {
  const std::vector<BoundingBox> gt{{0, 0, 10, 10}, {50, 50, 10, 10}};
  const EvaluationReport same = evaluate(gt, gt);
  EXPECT_EQ(same.precision_at_20, 1.0);
  EXPECT_EQ(same.auc, 1.0);

  const std::vector<BoundingBox> far{{200, 200, 10, 10}, {300, 300, 10, 10}};
  const EvaluationReport lost = evaluate(far, gt);
  EXPECT_EQ(lost.precision_at_20, 0.0);
  EXPECT_EQ(lost.auc, 0.0);

  const std::vector<BoundingBox> half{{0, 0, 10, 10}, {300, 300, 10, 10}};
  const EvaluationReport r = evaluate(half, gt);
  EXPECT_EQ(r.precision_at_20, 0.5);
  EXPECT_EQ(r.auc, 0.5);
  EXPECT_EQ(r.frames, 2);
  EXPECT_THROW(evaluate(half, std::vector<BoundingBox>(gt.begin(), gt.begin() + 1)), InvalidInput);
}

TEST(Evaluate, MatchesBruteForceRecount) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0, 60), size(5, 25);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BoundingBox> res, gt;
    for (int i = 0; i < 30; ++i) {
      gt.push_back({pos(rng), pos(rng), size(rng), size(rng)});
      res.push_back({pos(rng), pos(rng), size(rng), size(rng)});
    }
    const EvaluationReport r = evaluate(res, gt);
    const testing::CurveRecount ref = testing::recount_curves(res, gt);
    EXPECT_EQ(r.precision_curve, ref.precision);
    EXPECT_EQ(r.success_curve, ref.success);
  }
}

TEST(Drr, Examples) {
  EXPECT_EQ(drr(50, 100, 50), 1.0);
  EXPECT_EQ(drr(0, 100, 50), 0.0);
  EXPECT_DOUBLE_EQ(drr(3, 576, 98), 3.0 / 98.0);
  EXPECT_THROW(drr(51, 100, 50), InvalidParameter);
}

TEST(Fdr, Examples) {
  const std::vector<double> same{0.1, 0.5, 0.9, 0.3};
  EXPECT_LT(fdr(same, same), 1e-12);
  EXPECT_GE(fdr(std::vector<double>(5, 1.0), std::vector<double>(5, 0.0)), 1e10);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> pos(1.0, 0.1), neg(0.0, 0.1);
  std::vector<double> p(1000), n(1000);
  for (auto& v : p) v = pos(rng);
  for (auto& v : n) v = neg(rng);
  const double f = fdr(p, n);
  EXPECT_GE(f, 40.0);
  EXPECT_LE(f, 60.0);
}

TEST(Report, CsvRoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(0, 40);
  std::vector<BoundingBox> res, gt;
  for (int i = 0; i < 7; ++i) {
    gt.push_back({pos(rng), pos(rng), 20, 20});
    res.push_back({pos(rng), pos(rng), 20, 20});
  }
  const EvaluationReport r = evaluate(res, gt);
  const auto [precision_csv, success_csv] = write_report(dir.path() / "report.txt", r);
  const auto p = read_curve_csv(precision_csv);
  const auto s = read_curve_csv(success_csv);
  ASSERT_EQ(p.size(), r.precision_curve.size());
  ASSERT_EQ(s.size(), r.success_curve.size());
  for (size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], r.precision_curve[i], 1e-6);
  for (size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], r.success_curve[i], 1e-6);
  EXPECT_NE(format_report(r).find("auc = "), std::string::npos);
}

}  // namespace
}  // namespace oet
