#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wordbias/embedding.hpp"
#include "wordbias/svm.hpp"

namespace wordbias {

/// Training labels over an embedding's vocabulary: the set-specific seed
/// words versus everything else.
struct LabeledVocab {
  std::vector<std::string> positives;
  std::vector<std::string> negatives;

  void validate_against(const Embedding& emb) const;
};

struct CrossValidationMetrics {
  double f_score_mean = 0.0;
  double f_score_std = 0.0;
  double balanced_accuracy_mean = 0.0;
  double balanced_accuracy_std = 0.0;
  int folds = 0;
};

/// Trains the linear SVM on the labeled word vectors with uniform
/// per-sample weight C. Deterministic; the seed only drives fold shuffling
/// in cross-validation, never training itself.
LinearClassifier train_specific_classifier(const Embedding& emb, const LabeledVocab& labels,
                                           double regularization_c, std::uint64_t seed);

/// Stratified k-fold cross-validation. With balanced = true, classes are
/// weighted inverse-proportionally to their counts and the regularization
/// parameter is chosen per fold by an inner 10-fold sweep over
/// {0.01, 0.1, 1, 10, 100} maximizing balanced accuracy.
CrossValidationMetrics cross_validate(const Embedding& emb, const LabeledVocab& labels,
                                      int folds, bool balanced, std::uint64_t seed,
                                      double regularization_c = 1.0);

/// base plus every token of `emb_full` outside `training_vocab` that the
/// classifier labels positive.
std::vector<std::string> expand_specific_set(const LinearClassifier& classifier,
                                             const Embedding& emb_full,
                                             const std::vector<std::string>& base,
                                             const std::vector<std::string>& training_vocab);

/// Exact complement of `specific` over the embedding's vocabulary, in
/// vocabulary order.
std::vector<std::string> neutral_set(const Embedding& emb,
                                     const std::vector<std::string>& specific);

}  // namespace wordbias
