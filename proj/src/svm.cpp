#include "wordbias/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wordbias/errors.hpp"

namespace wordbias {

namespace {

// Exact minimizer over b of sum_i c_i * max(0, 1 - y_i (f_i + b)): the hinge
// sum is convex piecewise linear in b with slope increasing by c_i at each
// breakpoint b_i = y_i - f_i, so the optimum is a weighted median.
double optimal_bias(const Vec& scores, const std::vector<int>& labels,
                    const std::vector<double>& weights) {
  const int n = static_cast<int>(labels.size());
  std::vector<std::pair<double, double>> breaks(n);  // (breakpoint, slope jump)
  double slope = 0.0;
  for (int i = 0; i < n; ++i) {
    breaks[i] = {labels[i] - scores[i], weights[i]};
    if (labels[i] > 0) slope -= weights[i];
  }
  std::sort(breaks.begin(), breaks.end());
  for (const auto& [point, jump] : breaks) {
    slope += jump;
    if (slope >= 0.0) return point;
  }
  return breaks.back().first;
}

double hinge_sum(const Vec& scores, const std::vector<int>& labels,
                 const std::vector<double>& weights, double bias) {
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    total += weights[i] * std::max(0.0, 1.0 - labels[i] * (scores[i] + bias));
  }
  return total;
}

}  // namespace

double svm_objective(const Mat& features, const std::vector<int>& labels,
                     const std::vector<double>& sample_weights, const Vec& weights,
                     double bias) {
  const Vec scores = features * weights;
  return 0.5 * weights.squaredNorm() + hinge_sum(scores, labels, sample_weights, bias);
}

LinearClassifier train_linear_svm(const Mat& features, const std::vector<int>& labels,
                                  const std::vector<double>& sample_weights,
                                  const SvmOptions& options) {
  const int n = static_cast<int>(features.rows());
  if (n < 2) throw DataError("svm: need at least two samples");
  if (static_cast<int>(labels.size()) != n || static_cast<int>(sample_weights.size()) != n) {
    throw DataError("svm: labels/weights size mismatch");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw DataError("svm: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw DataError("svm: training data contains a single class");
  for (double c : sample_weights) {
    if (!(c > 0.0)) throw DataError("svm: sample weights must be positive");
  }

  Vec alpha = Vec::Zero(n);
  Vec w = Vec::Zero(features.cols());
  Vec self_dot(n);
  for (int i = 0; i < n; ++i) self_dot[i] = features.row(i).squaredNorm();

  double best_bias = 0.0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const Vec scores = features * w;

    best_bias = optimal_bias(scores, labels, sample_weights);
    const double primal = 0.5 * w.squaredNorm() +
                          hinge_sum(scores, labels, sample_weights, best_bias);
    const double dual = alpha.sum() - 0.5 * w.squaredNorm();
    if (primal - dual <= options.tolerance * std::max(1.0, std::abs(primal))) break;

    // Maximal violating pair on v_i = y_i - f_i.
    int up = -1, low = -1;
    double up_val = -std::numeric_limits<double>::infinity();
    double low_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double v = labels[i] - scores[i];
      const bool in_up = labels[i] > 0 ? alpha[i] < sample_weights[i] : alpha[i] > 0.0;
      const bool in_low = labels[i] > 0 ? alpha[i] > 0.0 : alpha[i] < sample_weights[i];
      if (in_up && v > up_val) {
        up_val = v;
        up = i;
      }
      if (in_low && v < low_val) {
        low_val = v;
        low = i;
      }
    }
    if (up < 0 || low < 0 || up == low) break;

    const int i = up, j = low;
    const double s = static_cast<double>(labels[i]) * labels[j];
    double lo, hi;
    if (s < 0.0) {
      lo = std::max(0.0, alpha[j] - alpha[i]);
      hi = std::min(sample_weights[j], sample_weights[i] + alpha[j] - alpha[i]);
    } else {
      lo = std::max(0.0, alpha[i] + alpha[j] - sample_weights[i]);
      hi = std::min(sample_weights[j], alpha[i] + alpha[j]);
    }
    if (hi - lo < 1e-16) break;

    const double err_i = scores[i] - labels[i];
    const double err_j = scores[j] - labels[j];
    const double eta =
        std::max(self_dot[i] + self_dot[j] - 2.0 * features.row(i).dot(features.row(j)), 1e-12);
    const double alpha_j_new = std::clamp(alpha[j] + labels[j] * (err_i - err_j) / eta, lo, hi);
    const double delta_j = alpha_j_new - alpha[j];
    if (std::abs(delta_j) < 1e-16) break;
    const double delta_i = -s * delta_j;

    // Snap to the box after each move: rounding residue at a bound would
    // otherwise keep a pinned sample inside the working sets forever.
    const auto snap = [](double a, double c) {
      if (a < 1e-12 * c) return 0.0;
      if (a > c * (1.0 - 1e-12)) return c;
      return a;
    };
    alpha[i] = snap(std::clamp(alpha[i] + delta_i, 0.0, sample_weights[i]), sample_weights[i]);
    alpha[j] = snap(alpha_j_new, sample_weights[j]);
    w += delta_i * labels[i] * features.row(i).transpose() +
         delta_j * labels[j] * features.row(j).transpose();
  }

  // Recompute the bias at the final weights.
  best_bias = optimal_bias(features * w, labels, sample_weights);
  LinearClassifier clf;
  clf.weights = w;
  clf.bias = best_bias;
  return clf;
}

}  // namespace wordbias
