#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oet/features.hpp"

namespace oet {

inline constexpr int kPrecisionThresholds = 51;  // 0..50 px
inline constexpr int kSuccessThresholds = 21;    // 0, 0.05, ..., 1

struct EvaluationReport {
  std::vector<double> precision_curve;  // fraction with center error <= tau
  double precision_at_20 = 0.0;
  std::vector<double> success_curve;    // fraction with overlap >= theta
  double auc = 0.0;
  double mean_center_error = 0.0;
  double mean_overlap = 0.0;
  int frames = 0;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers.
double center_error(const BoundingBox& a, const BoundingBox& b);

inline double success_threshold(int k) { return 0.05 * k; }

/// One-pass evaluation. The first success threshold counts frames with any
/// overlap (iou > 0); the others count iou >= theta. AUC is the mean of the
/// success curve.
EvaluationReport evaluate(std::span<const BoundingBox> results,
                          std::span<const BoundingBox> ground_truth);

/// Dimension reduction ratio d / min(m, n).
double drr(int d, int m, int n);

/// (mean_pos - mean_neg)^2 / (var_pos + var_neg + 1e-12) with population
/// variances.
double fdr(std::span<const double> scores_pos, std::span<const double> scores_neg);

/// `key = value` block with the scalar fields.
std::string format_report(const EvaluationReport& report);

/// Writes <path> plus <stem>_precision.csv and <stem>_success.csv next to
/// it. Returns the two CSV paths.
std::pair<std::filesystem::path, std::filesystem::path> write_report(
    const std::filesystem::path& path, const EvaluationReport& report);

/// Reads a `threshold,value` CSV with a header line; returns the values.
std::vector<double> read_curve_csv(const std::filesystem::path& path);

}  // namespace oet
