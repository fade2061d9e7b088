#include "wordbias/gender_words.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "wordbias/errors.hpp"
#include "wordbias/rng.hpp"

namespace wordbias {

namespace {

constexpr double kCvGrid[] = {0.01, 0.1, 1.0, 10.0, 100.0};

struct FoldSplit {
  std::vector<int> train;  // indices into the stacked sample matrix
  std::vector<int> test;
};

struct Samples {
  Mat features;            // one row per word
  std::vector<int> labels; // +1 specific, -1 neutral
};

Samples collect_samples(const Embedding& emb, const LabeledVocab& labels) {
  const int n = static_cast<int>(labels.positives.size() + labels.negatives.size());
  Samples s{Mat(n, emb.dim()), std::vector<int>()};
  s.labels.reserve(n);
  int row = 0;
  for (const auto& token : labels.positives) {
    s.features.row(row++) = emb.vector_of(token).transpose();
    s.labels.push_back(1);
  }
  for (const auto& token : labels.negatives) {
    s.features.row(row++) = emb.vector_of(token).transpose();
    s.labels.push_back(-1);
  }
  return s;
}

std::vector<double> make_weights(const std::vector<int>& labels, double c, bool balanced) {
  const int n = static_cast<int>(labels.size());
  double pos = 0, neg = 0;
  for (int y : labels) (y > 0 ? pos : neg) += 1.0;
  std::vector<double> weights(n, c);
  if (balanced) {
    for (int i = 0; i < n; ++i) {
      weights[i] = c * n / (2.0 * (labels[i] > 0 ? pos : neg));
    }
  }
  return weights;
}

/// Round-robin assignment after a seeded per-class shuffle keeps per-fold
/// class proportions within one sample of the global split.
std::vector<FoldSplit> stratified_folds(const std::vector<int>& labels, int folds,
                                        std::uint64_t seed) {
  std::vector<int> pos, neg;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    (labels[i] > 0 ? pos : neg).push_back(i);
  }
  if (static_cast<int>(pos.size()) < folds || static_cast<int>(neg.size()) < folds) {
    throw DataError("cross-validation: a class has fewer samples than folds");
  }
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);

  std::vector<FoldSplit> splits(folds);
  std::vector<int> fold_of(labels.size());
  for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = static_cast<int>(i % folds);
  for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = static_cast<int>(i % folds);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    for (int f = 0; f < folds; ++f) {
      if (fold_of[i] == f) splits[f].test.push_back(i);
      else splits[f].train.push_back(i);
    }
  }
  return splits;
}

Mat take_rows(const Mat& m, const std::vector<int>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(idx[r]);
  return out;
}

std::vector<int> take_labels(const std::vector<int>& labels, const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(labels[i]);
  return out;
}

struct FoldScores {
  double f1 = 0.0;
  double balanced_accuracy = 0.0;
};

FoldScores score_fold(const LinearClassifier& clf, const Mat& features,
                      const std::vector<int>& labels) {
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    const bool predicted = clf.decision(features.row(i).transpose()) > 0.0;
    const bool actual = labels[i] > 0;
    if (predicted && actual) ++tp;
    else if (predicted && !actual) ++fp;
    else if (!predicted && actual) ++fn;
    else ++tn;
  }
  FoldScores s;
  s.f1 = tp > 0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
  const double tpr = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  const double tnr = tn + fp > 0 ? tn / (tn + fp) : 0.0;
  s.balanced_accuracy = 0.5 * (tpr + tnr);
  return s;
}

LinearClassifier fit(const Mat& features, const std::vector<int>& labels, double c,
                     bool balanced) {
  auto clf = train_linear_svm(features, labels, make_weights(labels, c, balanced));
  clf.regularization_c = c;
  return clf;
}

double inner_cv_balanced_accuracy(const Mat& features, const std::vector<int>& labels,
                                  double c, std::uint64_t seed) {
  const auto splits = stratified_folds(labels, 10, seed);
  double total = 0.0;
  for (const auto& split : splits) {
    const auto clf = fit(take_rows(features, split.train), take_labels(labels, split.train),
                         c, /*balanced=*/true);
    total += score_fold(clf, take_rows(features, split.test), take_labels(labels, split.test))
                 .balanced_accuracy;
  }
  return total / static_cast<double>(splits.size());
}

}  // namespace

void LabeledVocab::validate_against(const Embedding& emb) const {
  if (positives.empty() || negatives.empty()) {
    throw DataError("labeled vocabulary: both classes must be nonempty");
  }
  std::unordered_set<std::string> pos(positives.begin(), positives.end());
  for (const auto& token : negatives) {
    if (pos.count(token)) {
      throw DataError("labeled vocabulary: token '" + token + "' appears in both classes");
    }
  }
  for (const auto& token : positives) emb.require(token);
  for (const auto& token : negatives) emb.require(token);
}

LinearClassifier train_specific_classifier(const Embedding& emb, const LabeledVocab& labels,
                                           double regularization_c, std::uint64_t /*seed*/) {
  if (!(regularization_c > 0.0)) throw ConfigError("classifier: C must be > 0");
  labels.validate_against(emb);
  const auto samples = collect_samples(emb, labels);
  return fit(samples.features, samples.labels, regularization_c, /*balanced=*/false);
}

CrossValidationMetrics cross_validate(const Embedding& emb, const LabeledVocab& labels,
                                      int folds, bool balanced, std::uint64_t seed,
                                      double regularization_c) {
  if (folds < 2) throw ConfigError("cross-validation: folds must be >= 2");
  if (!(regularization_c > 0.0)) throw ConfigError("cross-validation: C must be > 0");
  labels.validate_against(emb);
  const auto samples = collect_samples(emb, labels);
  const auto splits = stratified_folds(samples.labels, folds, seed);

  std::vector<FoldScores> scores;
  scores.reserve(splits.size());
  for (std::size_t f = 0; f < splits.size(); ++f) {
    const auto& split = splits[f];
    const Mat train_x = take_rows(samples.features, split.train);
    const auto train_y = take_labels(samples.labels, split.train);

    double c = regularization_c;
    if (balanced) {
      // Nested parameter sweep inside the training portion of this fold.
      double best = -1.0;
      for (double candidate : kCvGrid) {
        const double acc =
            inner_cv_balanced_accuracy(train_x, train_y, candidate, seed * 1000003 + f + 1);
        if (acc > best) {
          best = acc;
          c = candidate;
        }
      }
    }
    const auto clf = fit(train_x, train_y, c, balanced);
    scores.push_back(score_fold(clf, take_rows(samples.features, split.test),
                                take_labels(samples.labels, split.test)));
  }

  CrossValidationMetrics metrics;
  metrics.folds = static_cast<int>(scores.size());
  double f_sum = 0, b_sum = 0;
  for (const auto& s : scores) {
    f_sum += s.f1;
    b_sum += s.balanced_accuracy;
  }
  metrics.f_score_mean = f_sum / scores.size();
  metrics.balanced_accuracy_mean = b_sum / scores.size();
  double f_var = 0, b_var = 0;
  for (const auto& s : scores) {
    f_var += (s.f1 - metrics.f_score_mean) * (s.f1 - metrics.f_score_mean);
    b_var += (s.balanced_accuracy - metrics.balanced_accuracy_mean) *
             (s.balanced_accuracy - metrics.balanced_accuracy_mean);
  }
  metrics.f_score_std = std::sqrt(f_var / scores.size());
  metrics.balanced_accuracy_std = std::sqrt(b_var / scores.size());
  return metrics;
}

std::vector<std::string> expand_specific_set(const LinearClassifier& classifier,
                                             const Embedding& emb_full,
                                             const std::vector<std::string>& base,
                                             const std::vector<std::string>& training_vocab) {
  if (classifier.weights.size() != emb_full.dim()) {
    throw DataError("expand: classifier dimension " + std::to_string(classifier.weights.size()) +
                    " does not match embedding dimension " + std::to_string(emb_full.dim()));
  }
  std::unordered_set<std::string> skip(training_vocab.begin(), training_vocab.end());
  std::unordered_set<std::string> in_base(base.begin(), base.end());
  std::vector<std::string> expanded = base;
  for (int i = 0; i < emb_full.size(); ++i) {
    const std::string& token = emb_full.vocab()[i];
    if (skip.count(token) || in_base.count(token)) continue;
    if (classifier.predict(emb_full.matrix().row(i).transpose())) {
      expanded.push_back(token);
    }
  }
  return expanded;
}

std::vector<std::string> neutral_set(const Embedding& emb,
                                     const std::vector<std::string>& specific) {
  std::unordered_set<std::string> skip(specific.begin(), specific.end());
  std::vector<std::string> neutral;
  neutral.reserve(emb.size());
  for (const auto& token : emb.vocab()) {
    if (!skip.count(token)) neutral.push_back(token);
  }
  return neutral;
}

}  // namespace wordbias
