#include "oet/kernel_hsic.hpp"

#include <algorithm>
#include <cmath>

#include "oet/error.hpp"

namespace oet {

LabelMatrix::LabelMatrix(std::vector<Label> labels)
    : labels_(std::move(labels)) {}

LabelMatrix LabelMatrix::from_counts(int n_target, int n_background) {
  std::vector<Label> labels(static_cast<size_t>(n_target), Label::kTarget);
  labels.insert(labels.end(), static_cast<size_t>(n_background),
                Label::kBackground);
  return LabelMatrix(std::move(labels));
}

int LabelMatrix::count(Label which) const {
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), which));
}

Matrix LabelMatrix::as_matrix() const {
  Matrix y = Matrix::Zero(2, size());
  for (int i = 0; i < size(); ++i) {
    y(labels_[i] == Label::kTarget ? 0 : 1, i) = 1.0;
  }
  return y;
}

CenteredSamples center_samples(const Matrix& x) {
  if (x.cols() < 1) {
    throw InvalidInput("center_samples: need at least one sample");
  }
  CenteredSamples out;
  out.mean = x.rowwise().mean();
  out.centered = x.colwise() - out.mean;
  return out;
}

Matrix gaussian_kernel(const LabelMatrix& y, double sigma) {
  if (!(sigma > 0.0)) {
    throw InvalidParameter("gaussian_kernel: sigma must be positive");
  }
  const int n = y.size();
  // Two one-hot labels are either equal or at squared distance 2.
  const double cross = std::exp(-2.0 / (2.0 * sigma * sigma));
  Matrix l(n, n);
  const auto& labels = y.labels();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      l(i, j) = labels[i] == labels[j] ? 1.0 : cross;
    }
  }
  return l;
}

Matrix double_center(const Matrix& k) {
  if (k.rows() != k.cols()) {
    throw InvalidInput("double_center: kernel must be square");
  }
  // H K H without forming H: subtract row and column means, add back the
  // grand mean.
  const Vector row_mean = k.rowwise().mean();
  const Eigen::RowVectorXd col_mean = k.colwise().mean();
  const double grand = k.mean();
  Matrix out = k;
  out.colwise() -= row_mean;
  out.rowwise() -= col_mean;
  out.array() += grand;
  return 0.5 * (out + out.transpose());
}

Matrix linear_kernel(const Matrix& z) { return z.transpose() * z; }

double empirical_hsic(const Matrix& k, const Matrix& l) {
  if (k.rows() != k.cols() || l.rows() != l.cols() || k.rows() != l.rows()) {
    throw InvalidInput("empirical_hsic: kernels must be square and equal size");
  }
  const Eigen::Index n = k.rows();
  if (n < 2) {
    throw InvalidInput("empirical_hsic: need at least two samples");
  }
  // tr(KL) and tr(LK) summed in both orders so swapping the arguments gives
  // a bit-identical result.
  const double kl = k.cwiseProduct(l.transpose()).sum();
  const double lk = l.cwiseProduct(k.transpose()).sum();
  return 0.5 * (kl + lk) / static_cast<double>(n - 1);
}

}  // namespace oet
