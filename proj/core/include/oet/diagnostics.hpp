#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "oet/embedding.hpp"

namespace oet {

struct DiagnosticResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct DiagnosticOptions {
  std::uint64_t seed = 7;
  /// Receives per-iteration objective traces when non-null.
  std::ostream* trace = nullptr;
  /// Formula under test for the E2 gradient check.
  E2Formula e2_formula = E2Formula::kDerived;
};

/// Seeded self-check of the subspace solver: supervised-PCA equivalence,
/// rank recovery, monotone convergence and the E2 zero-gradient condition.
std::vector<DiagnosticResult> run_solver_diagnostics(const DiagnosticOptions& opts);

// Fixture builders shared by the diagnostics, tests and benchmarks.

/// U V^T with standard-normal m x rank and n x rank factors.
Matrix random_low_rank(int m, int n, int rank, std::mt19937_64& rng);

/// Sparse spikes of magnitude in [lo, hi] with random sign on a Bernoulli
/// support of the given density; `support` receives the 0/1 mask.
Matrix random_sparse(int m, int n, double density, double lo, double hi,
                     std::mt19937_64& rng, Matrix* support = nullptr);

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng);

/// Labels with at least one sample of each class.
LabelMatrix random_labels(int n, std::mt19937_64& rng);

/// Squared-residual quadratic minimized by the E2 update:
/// ||A - (X - E2) Q^T||_F^2 + ||E1 - E2||_F^2.
double e2_quadratic(const Matrix& a, const Matrix& x, const Matrix& q,
                    const Matrix& e1, const Matrix& e2);

/// Central-difference gradient norm of e2_quadratic at e2.
double e2_gradient_norm_fd(const Matrix& a, const Matrix& x, const Matrix& q,
                           const Matrix& e1, const Matrix& e2, double step = 1e-4);

}  // namespace oet
