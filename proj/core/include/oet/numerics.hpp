#pragma once

#include <Eigen/Dense>

namespace oet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin SVD M = U * diag(S) * V^T with r = min(m, n) factors.
struct SvdFactors {
  Matrix left_vectors;     // m x r, orthonormal columns
  Vector singular_values;  // r, non-negative, non-increasing
  Matrix right_vectors;    // n x r, orthonormal columns
};

/// sign(x) * max(0, |x| - theta). Throws InvalidParameter for theta < 0.
double soft_threshold(double theta, double x);
Matrix soft_threshold(double theta, const Matrix& x);

SvdFactors svd(const Matrix& m);

/// Proximal operator of theta * ||.||_*: shrinks every singular value by
/// theta and drops the ones that reach zero.
Matrix singular_value_shrinkage(double theta, const Matrix& m);

/// Q with Q^T Q = L for a symmetric PSD L, built as Lambda^(1/2) V^T from the
/// symmetric eigendecomposition. Eigenvalues down to -1e-6 * ||L||_2 are
/// clamped to zero; anything more negative raises NotPsd.
Matrix psd_factor(const Matrix& l);

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Number of values strictly above rel_tol * max(values); 0 if max is 0.
int numerical_rank(const Vector& singular_values,
                   double rel_tol = kDefaultRankTolerance);

double nuclear_norm(const Matrix& m);

}  // namespace oet

namespace oet {

/// Largest principal angle (radians) between the column spans of a and b,
/// both with orthonormal columns. Spans of different dimension give pi/2.
double max_principal_angle(const Matrix& a, const Matrix& b);

}  // namespace oet
