#include "oet/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "oet/error.hpp"

namespace oet {

void Frame::validate() const {
  if (width() < 32 || height() < 32) {
    throw InvalidInput("frame must be at least 32x32, got " +
                       std::to_string(width()) + "x" + std::to_string(height()));
  }
  if (pixels.size() > 0 &&
      (!pixels.allFinite() || pixels.minCoeff() < 0.0 || pixels.maxCoeff() > 1.0)) {
    throw InvalidInput("frame pixels must lie in [0, 1]");
  }
}

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "hog") return FeatureMode::kHog;
  if (text == "raw") return FeatureMode::kRaw;
  throw InvalidParameter("unknown feature mode '" + std::string(text) +
                         "' (expected hog or raw)");
}

std::string_view to_string(FeatureMode mode) {
  return mode == FeatureMode::kHog ? "hog" : "raw";
}

Matrix crop_resize(const Frame& frame, const BoundingBox& box) {
  if (!box.valid()) throw InvalidInput("crop_resize: box must have positive extents");
  const int width = frame.width();
  const int height = frame.height();
  if (width == 0 || height == 0 || box.x >= width || box.y >= height ||
      box.x + box.w <= 0.0 || box.y + box.h <= 0.0) {
    throw OutOfFrame("crop_resize: box does not overlap the frame");
  }
  const double step_x = box.w / kPatchSize;
  const double step_y = box.h / kPatchSize;

  Matrix patch(kPatchSize, kPatchSize);
  for (int i = 0; i < kPatchSize; ++i) {
    const double sy =
        std::clamp(box.y + (i + 0.5) * step_y - 0.5, 0.0, height - 1.0);
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, height - 1);
    const double fy = sy - y0;
    for (int j = 0; j < kPatchSize; ++j) {
      const double sx =
          std::clamp(box.x + (j + 0.5) * step_x - 0.5, 0.0, width - 1.0);
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, width - 1);
      const double fx = sx - x0;
      const auto& p = frame.pixels;
      const double top = p(y0, x0) + fx * (p(y0, x1) - p(y0, x0));
      const double bottom = p(y1, x0) + fx * (p(y1, x1) - p(y1, x0));
      patch(i, j) = top + fy * (bottom - top);
    }
  }
  return patch;
}

Vector hog(const Matrix& patch) {
  if (patch.rows() != kPatchSize || patch.cols() != kPatchSize) {
    throw InvalidInput("hog: patch must be 20x20");
  }
  constexpr double kBinWidth = 180.0 / kHogBins;
  constexpr double kEps = 1e-6;
  std::array<double, kHogCells * kHogCells * kHogBins> cells{};

  for (int y = 0; y < kPatchSize; ++y) {
    const int up = std::max(y - 1, 0);
    const int down = std::min(y + 1, kPatchSize - 1);
    for (int x = 0; x < kPatchSize; ++x) {
      const int left = std::max(x - 1, 0);
      const int right = std::min(x + 1, kPatchSize - 1);
      const double gx = patch(y, right) - patch(y, left);
      const double gy = patch(down, x) - patch(up, x);
      const double magnitude = std::hypot(gx, gy);
      if (magnitude == 0.0) continue;

      double angle = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      const double position = angle / kBinWidth;
      const int lower = static_cast<int>(std::floor(position)) % kHogBins;
      const int upper = (lower + 1) % kHogBins;
      const double frac = position - std::floor(position);

      const int cell = (y / kHogCellSize) * kHogCells + (x / kHogCellSize);
      cells[cell * kHogBins + lower] += magnitude * (1.0 - frac);
      cells[cell * kHogBins + upper] += magnitude * frac;
    }
  }

  Vector out(kHogLength);
  int offset = 0;
  for (int by = 0; by < kHogBlocks; ++by) {
    for (int bx = 0; bx < kHogBlocks; ++bx) {
      const int start = offset;
      for (int cy = by; cy < by + 2; ++cy) {
        for (int cx = bx; cx < bx + 2; ++cx) {
          for (int b = 0; b < kHogBins; ++b) {
            out(offset++) = cells[(cy * kHogCells + cx) * kHogBins + b];
          }
        }
      }
      auto block = out.segment(start, 4 * kHogBins);
      block /= std::sqrt(block.squaredNorm() + kEps * kEps);
    }
  }
  return out;
}

Vector raw_feature(const Matrix& patch) {
  Vector out(patch.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < patch.rows(); ++i) {
    for (Eigen::Index j = 0; j < patch.cols(); ++j) out(k++) = patch(i, j);
  }
  return out;
}

Vector extract_feature(const Frame& frame, const BoundingBox& box,
                       FeatureMode mode) {
  const Matrix patch = crop_resize(frame, box);
  return mode == FeatureMode::kHog ? hog(patch) : raw_feature(patch);
}

}  // namespace oet
