#pragma once

#include <string_view>

#include "oet/numerics.hpp"

namespace oet {

/// Row-major grayscale image: pixels(y, x) in [0, 1].
struct Frame {
  Matrix pixels;
  int index = 0;

  int width() const { return static_cast<int>(pixels.cols()); }
  int height() const { return static_cast<int>(pixels.rows()); }

  /// Throws InvalidInput if the frame is smaller than 32x32 or has pixels
  /// outside [0, 1].
  void validate() const;
};

/// Axis-aligned rectangle; (x, y) is the top-left corner in pixels.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class FeatureMode { kHog, kRaw };

FeatureMode parse_feature_mode(std::string_view text);
std::string_view to_string(FeatureMode mode);

inline constexpr int kPatchSize = 20;
inline constexpr int kHogCellSize = 4;
inline constexpr int kHogBins = 9;
inline constexpr int kHogCells = kPatchSize / kHogCellSize;  // 5
inline constexpr int kHogBlocks = kHogCells - 1;              // 4
inline constexpr int kHogLength = kHogBlocks * kHogBlocks * 4 * kHogBins;
inline constexpr int kRawLength = kPatchSize * kPatchSize;

constexpr int feature_length(FeatureMode mode) {
  return mode == FeatureMode::kHog ? kHogLength : kRawLength;
}

/// Bilinear resample of the box onto a 20x20 grid (pixel-center aligned,
/// border pixels replicated). Throws OutOfFrame when the box misses the
/// frame entirely.
Matrix crop_resize(const Frame& frame, const BoundingBox& box);

/// 576-dimensional HOG: central-difference gradients, 9 unsigned bins
/// centered at multiples of 20 degrees with linear vote splitting, 4x4-pixel
/// cells, 2x2-cell blocks at stride 1, each block L2-normalized.
Vector hog(const Matrix& patch);

/// Row-major flattening of the patch.
Vector raw_feature(const Matrix& patch);

Vector extract_feature(const Frame& frame, const BoundingBox& box,
                       FeatureMode mode);

}  // namespace oet
