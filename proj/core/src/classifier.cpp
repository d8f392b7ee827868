#include "oet/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "oet/error.hpp"
#include "oet/kernel_hsic.hpp"

namespace oet {

double LinearClassifier::predict(const Vector& z) const {
  if (z.size() != weights.size()) {
    throw InvalidInput("predict: embedding has length " +
                       std::to_string(z.size()) + ", classifier expects " +
                       std::to_string(weights.size()));
  }
  return weights.dot(z) + bias;
}

LinearClassifier train_classifier(const Matrix& z, const std::vector<int>& labels,
                                  double reg) {
  const Eigen::Index d = z.rows();
  const Eigen::Index n = z.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw InvalidInput("train_classifier: label count does not match embeddings");
  }
  if (!(reg > 0.0)) {
    throw InvalidParameter("train_classifier: reg must be positive");
  }
  Vector y(n);
  int positives = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidInput("train_classifier: labels must be 0 or 1");
    }
    y(i) = labels[i];
    positives += labels[i];
  }
  if (positives == 0 || positives == n) {
    throw InvalidTrainingSet("train_classifier: both classes must be present");
  }
  const Vector mean = z.rowwise().mean();
  const Matrix centered = z.colwise() - mean;
  if (centered.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, z.cwiseAbs().maxCoeff())) {
    throw InvalidTrainingSet(
        "train_classifier: all embeddings are identical; classes are inseparable");
  }

  // With an unpenalized bias the problem separates: w solves the ridge
  // system on centered data and b matches the means.
  const double y_mean = y.mean();
  const Matrix gram =
      centered * centered.transpose() + reg * Matrix::Identity(d, d);
  LinearClassifier clf;
  clf.weights = gram.ldlt().solve(centered * (y.array() - y_mean).matrix());
  clf.bias = y_mean - clf.weights.dot(mean);
  clf.reg = reg;
  if (!clf.weights.allFinite() || !std::isfinite(clf.bias)) {
    throw InvalidTrainingSet("train_classifier: solve produced non-finite weights");
  }
  return clf;
}

double discrimination_error(const LinearClassifier& clf, const Vector& z) {
  return std::abs(clf.predict(z) - 1.0);
}

double hsic_target_margin(const Matrix& z_train, const std::vector<int>& labels,
                          const Vector& z, double label_sigma) {
  const Eigen::Index n = z_train.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n || z.size() != z_train.rows()) {
    throw InvalidInput("hsic_target_margin: inconsistent shapes");
  }
  Matrix augmented(z_train.rows(), n + 1);
  augmented << z_train, z;
  const Matrix k = linear_kernel(center_samples(augmented).centered);

  auto hsic_with = [&](Label candidate_label) {
    std::vector<Label> y;
    y.reserve(static_cast<size_t>(n + 1));
    for (int v : labels) y.push_back(v == 1 ? Label::kTarget : Label::kBackground);
    y.push_back(candidate_label);
    const Matrix l = double_center(gaussian_kernel(LabelMatrix(std::move(y)), label_sigma));
    return empirical_hsic(k, l);
  };
  return hsic_with(Label::kTarget) - hsic_with(Label::kBackground);
}

}  // namespace oet
