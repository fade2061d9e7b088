#pragma once

#include <vector>

#include "wordbias/linalg.hpp"

namespace wordbias {

/// Separating hyperplane of a linear SVM. decision(x) > 0 predicts the
/// positive class.
struct LinearClassifier {
  Vec weights;
  double bias = 0.0;
  double regularization_c = 1.0;

  double decision(const Vec& x) const { return weights.dot(x) + bias; }
  bool predict(const Vec& x) const { return decision(x) > 0.0; }
};

struct SvmOptions {
  int max_iters = 200000;
  /// Stop when the duality gap falls below tol * max(1, |primal|).
  double tolerance = 1e-4;
};

/// Primal objective 0.5 |w|^2 + sum_i c_i max(0, 1 - y_i (w.x_i + b)).
double svm_objective(const Mat& features, const std::vector<int>& labels,
                     const std::vector<double>& sample_weights, const Vec& weights,
                     double bias);

/// Trains the hinge-loss SVM with an unregularized bias term by pairwise
/// coordinate ascent on the dual (maximal-violating-pair selection), keeping
/// the weight vector materialized so each step costs one mat-vec. The bias
/// is recovered as the exact minimizer of the primal in b. Deterministic:
/// ties in pair selection break toward the lowest index.
/// `sample_weights` holds the per-sample upper bound c_i (class weighting).
LinearClassifier train_linear_svm(const Mat& features, const std::vector<int>& labels,
                                  const std::vector<double>& sample_weights,
                                  const SvmOptions& options = {});

}  // namespace wordbias
