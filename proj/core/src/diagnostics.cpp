#include "oet/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace oet {

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

DiagnosticResult check_supervised_pca(std::mt19937_64& rng) {
  constexpr int kInstances = 10;
  double worst = 0.0;
  SolverConfig cfg;
  cfg.sparse_error = false;
  for (int i = 0; i < kInstances; ++i) {
    const Matrix x = random_gaussian(40, 30, rng);
    const LabelMatrix y = random_labels(30, rng);
    const SubspaceModel model = learn_embedding(TrainingSet{x, y}, cfg);
    const Matrix l = double_center(gaussian_kernel(y, cfg.label_sigma));
    const Matrix reference =
        supervised_pca(center_samples(x).centered, l, model.dim);
    worst = std::max(worst, max_principal_angle(model.basis, reference));
  }
  return {"supervised_pca_equivalence", worst < 1e-6,
          format("max principal angle %.3e rad (limit 1e-6)", worst)};
}

DiagnosticResult check_rank_recovery(std::mt19937_64& rng, std::ostream* trace,
                                     DiagnosticResult& convergence) {
  constexpr int kInstances = 5;
  int recovered = 0;
  bool monotone = true;
  bool converged = true;
  int max_iters = 0;
  double worst_rise = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const Matrix x = random_low_rank(100, 50, 3, rng) +
                     random_sparse(100, 50, 0.05, 5.0, 10.0, rng);
    const SubspaceModel model =
        learn_embedding(x, Matrix::Identity(50, 50), SolverConfig{});
    if (model.dim == 3) ++recovered;
    converged = converged && model.converged;
    max_iters = std::max(max_iters, model.iterations);
    for (size_t k = 1; k < model.objective_trace.size(); ++k) {
      const double rise = model.objective_trace[k] - model.objective_trace[k - 1];
      worst_rise = std::max(worst_rise, rise);
      if (rise > 1e-9) monotone = false;
    }
    if (trace) {
      *trace << "instance " << i << ": d = " << model.dim << ", "
             << model.iterations << " iterations\n";
      for (size_t k = 0; k < model.objective_trace.size(); ++k) {
        char line[96];
        std::snprintf(line, sizeof line, "  iter %3zu  objective %.12e\n", k,
                      model.objective_trace[k]);
        *trace << line;
      }
    }
  }
  convergence = {"monotone_convergence", monotone && converged,
                 format("largest objective rise %.3e, slowest run %.0f iterations",
                        worst_rise, max_iters)};
  return {"rank_recovery", recovered == kInstances,
          format("recovered d = 3 on %.0f of %.0f instances", recovered, kInstances)};
}

DiagnosticResult check_e2_gradient(std::mt19937_64& rng, E2Formula formula) {
  constexpr int kInstances = 5;
  double worst = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const Matrix x = random_gaussian(8, 6, rng);
    const Matrix q = random_gaussian(6, 6, rng);
    const Matrix a = random_gaussian(8, 6, rng);
    const Matrix e1 = random_gaussian(8, 6, rng);
    const Matrix e2 = step_e2(a, x, q, e1, formula);
    worst = std::max(worst, e2_gradient_norm_fd(a, x, q, e1, e2));
  }
  return {"e2_zero_gradient", worst < 1e-6,
          format("finite-difference gradient norm %.3e (limit 1e-6)", worst)};
}

}  // namespace

std::vector<DiagnosticResult> run_solver_diagnostics(const DiagnosticOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<DiagnosticResult> out;
  out.push_back(check_supervised_pca(rng));
  DiagnosticResult convergence;
  out.push_back(check_rank_recovery(rng, opts.trace, convergence));
  out.push_back(convergence);
  out.push_back(check_e2_gradient(rng, opts.e2_formula));
  return out;
}

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Matrix random_low_rank(int m, int n, int rank, std::mt19937_64& rng) {
  const Matrix u = random_gaussian(m, rank, rng);
  const Matrix v = random_gaussian(n, rank, rng);
  return u * v.transpose();
}

Matrix random_sparse(int m, int n, double density, double lo, double hi,
                     std::mt19937_64& rng, Matrix* support) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix s = Matrix::Zero(m, n);
  if (support) *support = Matrix::Zero(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const bool on = unit(rng) < density;
      const double magnitude = lo + (hi - lo) * unit(rng);
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      if (on) {
        s(i, j) = sign * magnitude;
        if (support) (*support)(i, j) = 1.0;
      }
    }
  }
  return s;
}

LabelMatrix random_labels(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Label> labels(static_cast<size_t>(n));
  for (auto& l : labels) l = coin(rng) ? Label::kTarget : Label::kBackground;
  labels[0] = Label::kTarget;
  labels[static_cast<size_t>(n - 1)] = Label::kBackground;
  return LabelMatrix(std::move(labels));
}

double e2_quadratic(const Matrix& a, const Matrix& x, const Matrix& q,
                    const Matrix& e1, const Matrix& e2) {
  return (a - (x - e2) * q.transpose()).squaredNorm() + (e1 - e2).squaredNorm();
}

double e2_gradient_norm_fd(const Matrix& a, const Matrix& x, const Matrix& q,
                           const Matrix& e1, const Matrix& e2, double step) {
  Matrix probe = e2;
  double sq = 0.0;
  for (Eigen::Index j = 0; j < e2.cols(); ++j) {
    for (Eigen::Index i = 0; i < e2.rows(); ++i) {
      const double keep = probe(i, j);
      probe(i, j) = keep + step;
      const double up = e2_quadratic(a, x, q, e1, probe);
      probe(i, j) = keep - step;
      const double down = e2_quadratic(a, x, q, e1, probe);
      probe(i, j) = keep;
      const double g = (up - down) / (2.0 * step);
      sq += g * g;
    }
  }
  return std::sqrt(sq);
}

}  // namespace oet
