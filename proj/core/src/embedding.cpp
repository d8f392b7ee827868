#include "oet/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oet/error.hpp"

namespace oet {

namespace {

// Flips each column so its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index at = 0;
    basis.col(j).cwiseAbs().maxCoeff(&at);
    if (basis(at, j) < 0.0) basis.col(j) *= -1.0;
  }
}

void require_shape(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

// (Q^T Q + I) is SPD, so one Cholesky factorization serves every E2 update.
class E2Solver {
 public:
  E2Solver(const Matrix& q, E2Formula formula)
      : q_(q),
        gram_(q.transpose() * q),
        factor_(gram_ + Matrix::Identity(q.cols(), q.cols())),
        formula_(formula) {}

  Matrix solve(const Matrix& a, const Matrix& x, const Matrix& e1) const {
    Matrix rhs = (formula_ == E2Formula::kDerived)
                     ? Matrix(x * gram_ - a * q_ + e1)
                     : Matrix(a * q_ - x * gram_ + e1);
    // E2 (G + I) = rhs  <=>  (G + I) E2^T = rhs^T.
    return factor_.solve(rhs.transpose()).transpose();
  }

 private:
  const Matrix& q_;
  Matrix gram_;
  Eigen::LLT<Matrix> factor_;
  E2Formula formula_;
};

}  // namespace

void TrainingSet::validate() const {
  if (labels.size() != features.cols()) {
    throw InvalidTrainingSet("label count " + std::to_string(labels.size()) +
                             " does not match sample count " +
                             std::to_string(features.cols()));
  }
  if (n_pos() < 1 || n_neg() < 1) {
    throw InvalidTrainingSet("training set needs both target and background samples");
  }
  if (!features.allFinite()) {
    throw InvalidTrainingSet("training features contain non-finite entries");
  }
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw InvalidParameter("solver: lambda must be positive");
  if (mu && !(*mu > 0.0)) throw InvalidParameter("solver: mu must be positive");
  if (!(tol > 0.0)) throw InvalidParameter("solver: tol must be positive");
  if (max_iter < 1) throw InvalidParameter("solver: max_iter must be >= 1");
  if (!(label_sigma > 0.0)) {
    throw InvalidParameter("solver: label_sigma must be positive");
  }
  if (!(rank_tol >= 0.0)) {
    throw InvalidParameter("solver: rank_tol must be non-negative");
  }
}

Matrix supervised_pca(const Matrix& x_centered, const Matrix& l, int d) {
  const Eigen::Index m = x_centered.rows();
  const Eigen::Index n = x_centered.cols();
  if (l.rows() != n || l.cols() != n) {
    throw InvalidInput("supervised_pca: label kernel must be n x n");
  }
  if (d < 1 || d > std::min(m, n)) {
    throw InvalidParameter("supervised_pca: d must lie in [1, min(m, n)]");
  }
  Matrix scatter = x_centered * l * x_centered.transpose();
  scatter = 0.5 * (scatter + scatter.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(scatter);
  if (eig.info() != Eigen::Success) {
    throw InvalidInput("supervised_pca: eigendecomposition failed");
  }
  // Eigenvalues come back ascending.
  Matrix basis = eig.eigenvectors().rightCols(d).rowwise().reverse();
  canonicalize_signs(basis);
  return basis;
}

Matrix step_a(const Matrix& x, const Matrix& e2, const Matrix& q, double mu) {
  require_shape(x.rows() == e2.rows() && x.cols() == e2.cols() &&
                    q.cols() == x.cols(),
                "step_a: inconsistent shapes");
  if (!(mu > 0.0)) throw InvalidParameter("step_a: mu must be positive");
  return singular_value_shrinkage(1.0 / mu, (x - e2) * q.transpose());
}

Matrix step_e1(const Matrix& e2, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) {
    throw InvalidParameter("step_e1: lambda and mu must be positive");
  }
  return soft_threshold(lambda / mu, e2);
}

Matrix step_e2(const Matrix& a, const Matrix& x, const Matrix& q,
               const Matrix& e1, E2Formula formula) {
  require_shape(q.rows() == q.cols() && q.cols() == x.cols() &&
                    a.rows() == x.rows() && a.cols() == q.rows() &&
                    e1.rows() == x.rows() && e1.cols() == x.cols(),
                "step_e2: inconsistent shapes");
  return E2Solver(q, formula).solve(a, x, e1);
}

double objective(const Matrix& a, const Matrix& e1, const Matrix& e2,
                 const Matrix& x, const Matrix& q, double lambda, double mu) {
  const Matrix fit = a - (x - e2) * q.transpose();
  return nuclear_norm(a) + lambda * e1.cwiseAbs().sum() +
         0.5 * mu * fit.squaredNorm() + 0.5 * mu * (e1 - e2).squaredNorm();
}

double effective_lambda(const SolverConfig& cfg, Eigen::Index m,
                        Eigen::Index n) {
  if (!cfg.scale_lambda) return cfg.lambda;
  const double size = static_cast<double>(std::max<Eigen::Index>({m, n, 1}));
  return (cfg.lambda / kReferenceLambda) / std::sqrt(size);
}

SubspaceModel learn_embedding(const TrainingSet& train,
                              const SolverConfig& cfg) {
  train.validate();
  cfg.validate();
  Matrix l = double_center(gaussian_kernel(train.labels, cfg.label_sigma));
  // Rescaling L leaves the HSIC-optimal subspace unchanged. At unit spectral
  // norm Q^T has the same scale as the identity kernel, which keeps the
  // fixed mu from letting E2 absorb all of X Q^T when n is large.
  const double top = l.selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
  if (!(top > 0.0)) {
    throw DegenerateSubspace("learn_embedding: centered label kernel is zero");
  }
  l /= top;
  return learn_embedding(train.features, l, cfg);
}

SubspaceModel learn_embedding(const Matrix& features, const Matrix& label_kernel,
                              const SolverConfig& cfg) {
  cfg.validate();
  const Eigen::Index m = features.rows();
  const Eigen::Index n = features.cols();
  if (m < 2 || n < 2) {
    throw InvalidInput("learn_embedding: need m >= 2 features and n >= 2 samples");
  }
  if (label_kernel.rows() != n || label_kernel.cols() != n) {
    throw InvalidInput("learn_embedding: label kernel must be n x n");
  }
  if (!features.allFinite()) {
    throw InvalidInput("learn_embedding: features contain non-finite entries");
  }

  CenteredSamples centered = center_samples(features);
  const Matrix& x = centered.centered;
  const Matrix q = psd_factor(label_kernel);

  SubspaceModel model;
  model.mean = std::move(centered.mean);

  Matrix a = x * q.transpose();
  const double spectral = svd(a).singular_values(0);
  if (!(spectral > 0.0)) {
    throw DegenerateSubspace("learn_embedding: X Q^T is identically zero");
  }
  const double mu = cfg.mu.value_or(10.0 / spectral);
  const double lambda = effective_lambda(cfg, m, n);
  model.mu = mu;
  model.lambda = lambda;

  Matrix e1 = Matrix::Zero(m, n);
  Matrix e2 = Matrix::Zero(m, n);
  const E2Solver e2_solver(q, cfg.e2_formula);

  double previous = objective(a, e1, e2, x, q, lambda, mu);
  model.objective_trace.push_back(previous);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    a = singular_value_shrinkage(1.0 / mu, (x - e2) * q.transpose());
    if (cfg.sparse_error) {
      e1 = soft_threshold(lambda / mu, e2);
      e2 = e2_solver.solve(a, x, e1);
    }
    const double current = objective(a, e1, e2, x, q, lambda, mu);
    model.objective_trace.push_back(current);
    model.iterations = it;
    if (std::abs(current - previous) < cfg.tol) {
      model.converged = true;
      break;
    }
    previous = current;
  }

  const SvdFactors f = svd(a);
  const int d = numerical_rank(f.singular_values, cfg.rank_tol);
  if (d == 0) {
    throw DegenerateSubspace(
        "learn_embedding: every singular value was shrunk to zero");
  }
  model.basis = f.left_vectors.leftCols(d);
  canonicalize_signs(model.basis);
  model.dim = d;
  model.error = std::move(e1);
  return model;
}

}  // namespace oet
