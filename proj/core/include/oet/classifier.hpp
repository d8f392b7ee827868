#pragma once

#include <vector>

#include "oet/numerics.hpp"

namespace oet {

/// pi(z) = w^T z + b, trained by ridge regression on labels {1 target,
/// 0 background}.
struct LinearClassifier {
  Vector weights;
  double bias = 0.0;
  double reg = 0.0;

  double predict(const Vector& z) const;
};

/// Minimizes sum_i (w^T z_i + b - y_i)^2 + reg ||w||^2 (bias unpenalized).
/// Throws InvalidTrainingSet for single-class input or when every embedding
/// is identical.
LinearClassifier train_classifier(const Matrix& z, const std::vector<int>& labels,
                                  double reg);

/// The default regularization, 1e-3 * n.
inline double default_classifier_reg(Eigen::Index n) {
  return 1e-3 * static_cast<double>(n);
}

inline double predict(const LinearClassifier& clf, const Vector& z) {
  return clf.predict(z);
}

/// |pi(z) - 1|.
double discrimination_error(const LinearClassifier& clf, const Vector& z);

/// Difference in empirical HSIC between labelling z as target and as
/// background when it joins the training embeddings. Positive means the
/// target label explains z better. Uses a linear kernel on centered
/// embeddings and the double-centered Gaussian label kernel.
double hsic_target_margin(const Matrix& z_train, const std::vector<int>& labels,
                          const Vector& z, double label_sigma = 1.0);

}  // namespace oet
