#include "oet/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "oet/error.hpp"

namespace oet {

namespace {

void require_threshold(double theta) {
  if (!(theta >= 0.0)) {
    throw InvalidParameter("shrinkage threshold must be non-negative");
  }
}

}  // namespace

double soft_threshold(double theta, double x) {
  require_threshold(theta);
  const double magnitude = std::abs(x) - theta;
  if (magnitude <= 0.0) return 0.0;
  return std::copysign(magnitude, x);
}

Matrix soft_threshold(double theta, const Matrix& x) {
  require_threshold(theta);
  return x.unaryExpr([theta](double v) {
    const double magnitude = std::abs(v) - theta;
    return magnitude <= 0.0 ? 0.0 : std::copysign(magnitude, v);
  });
}

SvdFactors svd(const Matrix& m) {
  if (!m.allFinite()) {
    throw InvalidInput("svd: matrix has non-finite entries");
  }
  SvdFactors out;
  if (m.size() == 0) {
    out.left_vectors = Matrix::Zero(m.rows(), 0);
    out.singular_values = Vector::Zero(0);
    out.right_vectors = Matrix::Zero(m.cols(), 0);
    return out;
  }
  Eigen::BDCSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.left_vectors = solver.matrixU();
  out.singular_values = solver.singularValues();
  out.right_vectors = solver.matrixV();
  return out;
}

Matrix singular_value_shrinkage(double theta, const Matrix& m) {
  require_threshold(theta);
  const SvdFactors f = svd(m);
  const Vector shrunk = soft_threshold(theta, Matrix(f.singular_values));
  const Eigen::Index kept = numerical_rank(shrunk, 0.0);
  if (kept == 0) return Matrix::Zero(m.rows(), m.cols());
  return f.left_vectors.leftCols(kept) *
         shrunk.head(kept).asDiagonal() *
         f.right_vectors.leftCols(kept).transpose();
}

Matrix psd_factor(const Matrix& l) {
  if (l.rows() != l.cols()) {
    throw InvalidInput("psd_factor: matrix must be square");
  }
  if (!l.allFinite()) {
    throw InvalidInput("psd_factor: matrix has non-finite entries");
  }
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidInput("psd_factor: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (l + l.transpose()));
  if (eig.info() != Eigen::Success) {
    throw InvalidInput("psd_factor: eigendecomposition failed");
  }
  const Vector& values = eig.eigenvalues();
  const double spectral = values.cwiseAbs().maxCoeff();
  if (values.minCoeff() < -1e-6 * spectral) {
    throw NotPsd("psd_factor: matrix has a significantly negative eigenvalue");
  }
  const Vector root = values.cwiseMax(0.0).cwiseSqrt();
  return root.asDiagonal() * eig.eigenvectors().transpose();
}

int numerical_rank(const Vector& singular_values, double rel_tol) {
  if (singular_values.size() == 0) return 0;
  const double largest = singular_values.maxCoeff();
  if (!(largest > 0.0)) return 0;
  const double cutoff = rel_tol * largest;
  return static_cast<int>((singular_values.array() > cutoff).count());
}

double nuclear_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) {
    throw InvalidInput("nuclear_norm: matrix has non-finite entries");
  }
  return Eigen::BDCSVD<Matrix>(m).singularValues().sum();
}

}  // namespace oet

namespace oet {

double max_principal_angle(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw InvalidInput("max_principal_angle: bases live in different spaces");
  }
  if (a.cols() != b.cols()) return 1.5707963267948966;
  if (a.cols() == 0) return 0.0;
  // sin of the largest angle is ||(I - A A^T) B||_2; it stays accurate for
  // tiny angles where acos of the cosines would not.
  const Matrix residual = b - a * (a.transpose() * b);
  const double sine = svd(residual).singular_values(0);
  return std::asin(std::min(1.0, sine));
}

}  // namespace oet
