#pragma once

#include <vector>

#include "oet/embedding.hpp"

namespace oet {

/// A candidate expressed as mean + P z + e with a sparse residual e.
struct CandidateEmbedding {
  Vector z;  // d
  Vector e;  // m
  double rep_error = 0.0;  // ||e||_1
  bool converged = false;
  int iterations = 0;
  /// Best ||e||_1 after each iteration; non-increasing.
  std::vector<double> residual_trace;
};

struct ProjectionOptions {
  int max_iter = 200;
  double tol = 1e-8;
  bool record_trace = false;
};

/// Solves min ||e||_1 s.t. c - mean = P z + e by alternating a projection
/// step for z with a shrinkage step for the residual (ADMM with penalty
/// 10 / ||c - mean||_inf). The returned e always satisfies the constraint.
CandidateEmbedding project_candidate(const Vector& c, const SubspaceModel& model,
                                     const ProjectionOptions& opts = {});

inline double representation_error(const CandidateEmbedding& emb) {
  return emb.e.lpNorm<1>();
}

}  // namespace oet
