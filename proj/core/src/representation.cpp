#include "oet/representation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oet/error.hpp"

namespace oet {

CandidateEmbedding project_candidate(const Vector& c, const SubspaceModel& model,
                                     const ProjectionOptions& opts) {
  const Matrix& p = model.basis;
  if (c.size() != p.rows() || model.mean.size() != p.rows()) {
    throw InvalidInput("project_candidate: candidate length " +
                       std::to_string(c.size()) + " does not match model (" +
                       std::to_string(p.rows()) + ")");
  }
  const Vector centered = c - model.mean;

  CandidateEmbedding out;
  // Least-squares start: z = P^T c, e = c - P z.
  out.z = p.transpose() * centered;
  out.e = centered - p * out.z;
  out.rep_error = out.e.lpNorm<1>();
  if (opts.record_trace) out.residual_trace.push_back(out.rep_error);

  const double peak = centered.cwiseAbs().maxCoeff();
  if (!(peak > 0.0) || out.rep_error == 0.0) {
    out.converged = true;
    return out;
  }
  const double threshold = peak / 10.0;  // 1 / mu_c

  // ADMM on min ||s||_1 s.t. P z - s = c; s tracks -e and u is the scaled
  // multiplier.
  Vector s = -out.e;
  Vector u = Vector::Zero(c.size());
  double last = out.rep_error;
  const double scale = std::max(1.0, centered.norm());
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Vector z = p.transpose() * (centered + s - u);
    const Vector pz = p * z;
    s = soft_threshold(threshold, Matrix(pz - centered + u));
    const Vector primal = pz - s - centered;
    u += primal;

    const Vector e = centered - pz;
    const double value = e.lpNorm<1>();
    if (value < out.rep_error) {
      out.z = z;
      out.e = e;
      out.rep_error = value;
    }
    if (opts.record_trace) out.residual_trace.push_back(out.rep_error);
    out.iterations = it;
    if (std::abs(value - last) < opts.tol && primal.norm() < opts.tol * scale) {
      out.converged = true;
      break;
    }
    last = value;
  }
  return out;
}

}  // namespace oet
