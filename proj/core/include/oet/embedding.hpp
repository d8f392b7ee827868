#pragma once

#include <optional>
#include <vector>

#include "oet/kernel_hsic.hpp"
#include "oet/numerics.hpp"

namespace oet {

/// Samples as columns plus their target/background labels.
struct TrainingSet {
  Matrix features;  // m x n
  LabelMatrix labels;

  int n_pos() const { return labels.count(Label::kTarget); }
  int n_neg() const { return labels.count(Label::kBackground); }

  /// Throws InvalidTrainingSet unless both classes are present, the label
  /// count matches the sample count and every entry is finite.
  void validate() const;
};

/// Closed form used for the E2 update. kPrinted is the sign-flipped variant
/// kept only so diagnostics can show that it fails the gradient check.
enum class E2Formula { kDerived, kPrinted };

inline constexpr double kReferenceLambda = 1e-4;

struct SolverConfig {
  /// Sparse-error weight. With scale_lambda the weight applied is
  /// (lambda / kReferenceLambda) / sqrt(max(m, n)).
  double lambda = kReferenceLambda;
  bool scale_lambda = true;
  /// Quadratic-penalty weight; unset means 10 / ||X Q^T||_2.
  std::optional<double> mu;
  double tol = 1e-8;
  int max_iter = 500;
  /// Bandwidth of the Gaussian label kernel.
  double label_sigma = 1.0;
  double rank_tol = kDefaultRankTolerance;
  /// When false E1 = E2 = 0 throughout and only A is updated.
  bool sparse_error = true;
  E2Formula e2_formula = E2Formula::kDerived;

  void validate() const;
};

struct SubspaceModel {
  Matrix basis;  // m x d, orthonormal columns
  int dim = 0;
  Vector mean;   // m
  Matrix error;  // m x n, final E1
  std::vector<double> objective_trace;
  bool converged = false;
  int iterations = 0;
  double mu = 0.0;
  double lambda = 0.0;  // weight actually applied to ||E1||_1
};

/// Top-d eigenvectors of X L X^T as columns, largest eigenvalue first.
Matrix supervised_pca(const Matrix& x_centered, const Matrix& l, int d);

/// A = U shrink(1/mu, S) V^T of (X - E2) Q^T.
Matrix step_a(const Matrix& x, const Matrix& e2, const Matrix& q, double mu);

/// E1 = shrink(lambda / mu, E2).
Matrix step_e1(const Matrix& e2, double lambda, double mu);

/// Minimizer of ||A - (X - E2) Q^T||_F^2 + ||E1 - E2||_F^2 over E2:
/// E2 = (X Q^T Q - A Q + E1)(Q^T Q + I)^-1.
Matrix step_e2(const Matrix& a, const Matrix& x, const Matrix& q,
               const Matrix& e1, E2Formula formula = E2Formula::kDerived);

/// ||A||_* + lambda ||E1||_1 + mu/2 ||A - (X - E2) Q^T||_F^2
///   + mu/2 ||E1 - E2||_F^2.
double objective(const Matrix& a, const Matrix& e1, const Matrix& e2,
                 const Matrix& x, const Matrix& q, double lambda, double mu);

/// Weight applied to ||E1||_1 for an m x n problem under cfg.
double effective_lambda(const SolverConfig& cfg, Eigen::Index m,
                        Eigen::Index n);

/// Learns the subspace from labelled samples: centers X, builds the
/// double-centered Gaussian label kernel and runs the solver.
SubspaceModel learn_embedding(const TrainingSet& train,
                              const SolverConfig& cfg);

/// Same solver with an explicit n x n PSD label kernel, used as given.
/// Passing the identity recovers plain robust PCA on X.
SubspaceModel learn_embedding(const Matrix& features, const Matrix& label_kernel,
                              const SolverConfig& cfg);

}  // namespace oet
