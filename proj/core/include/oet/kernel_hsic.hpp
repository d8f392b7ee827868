#pragma once

#include <vector>

#include "oet/numerics.hpp"

namespace oet {

enum class Label { kTarget, kBackground };

/// Column i is [1,0]^T for a target sample and [0,1]^T for background.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  explicit LabelMatrix(std::vector<Label> labels);

  static LabelMatrix from_counts(int n_target, int n_background);

  const std::vector<Label>& labels() const noexcept { return labels_; }
  int size() const noexcept { return static_cast<int>(labels_.size()); }
  int count(Label which) const;

  /// 2 x n one-hot matrix.
  Matrix as_matrix() const;

 private:
  std::vector<Label> labels_;
};

struct CenteredSamples {
  Matrix centered;  // m x n, zero column mean
  Vector mean;      // m
};

/// Subtracts the sample mean from every column.
CenteredSamples center_samples(const Matrix& x);

/// L_ij = exp(-||y_i - y_j||^2 / (2 sigma^2)).
Matrix gaussian_kernel(const LabelMatrix& y, double sigma);

/// H * K * H with H = I - (1/n) 11^T.
Matrix double_center(const Matrix& k);

/// K = Z^T Z.
Matrix linear_kernel(const Matrix& z);

/// tr(K L) / (n - 1).
double empirical_hsic(const Matrix& k, const Matrix& l);

}  // namespace oet
