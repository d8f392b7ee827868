#pragma once

// Reference computations used to check the library. Each one takes a
// different route from the code under test: brute force, perturbation or
// finite differences.

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "oet/features.hpp"

namespace oet::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Counts perturbations x0 + scale * N(0, I) that give a strictly smaller
/// objective than x0 (beyond a relative slack).
int count_perturbation_violations(const std::function<double(const MatrixXd&)>& f,
                                  const MatrixXd& x0, int trials, double scale,
                                  std::mt19937_64& rng, double slack = 1e-12);

/// Central-difference gradient of f at x, entry by entry.
MatrixXd fd_gradient(const std::function<double(const MatrixXd&)>& f, const MatrixXd& x,
                     double step = 1e-5);

/// sin of the largest principal angle, computed as the spectral norm of the
/// difference of orthogonal projectors onto the two column spans.
double projector_distance(const MatrixXd& a, const MatrixXd& b);

/// Orthonormal basis of the column span (via full-pivot QR).
MatrixXd orthonormal_span(const MatrixXd& m, double tol = 1e-10);

/// argmin_t sum_i |r_i - t p_i| by scanning every breakpoint r_i / p_i.
double lad_1d_bruteforce(const VectorXd& r, const VectorXd& p);

/// Ridge with unpenalized bias via the augmented normal equations.
VectorXd ridge_normal_equations(const MatrixXd& z, const std::vector<int>& labels,
                                double reg);

struct CurveRecount {
  std::vector<double> precision;  // thresholds 0..50
  std::vector<double> success;    // thresholds 0, 0.05, ..., 1
};

/// Per-frame recount using pixel-interval overlap arithmetic.
CurveRecount recount_curves(std::span<const BoundingBox> results,
                            std::span<const BoundingBox> truth);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

/// Random symmetric PSD n x n matrix B B^T with B n x rank.
MatrixXd random_psd(int n, int rank, std::mt19937_64& rng);

}  // namespace oet::testing
