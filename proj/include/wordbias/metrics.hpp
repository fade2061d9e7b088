#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wordbias/embedding.hpp"
#include "wordbias/subspace.hpp"

namespace wordbias {

struct DirectBiasParams {
  double strictness = 1.0;  // the exponent c; c = 0 counts any nonzero overlap

  void validate() const;
};

/// Tokens with the largest positive and most negative projections onto a
/// direction, each list sorted outward from zero. `truncated` flags a
/// request for more entries than there were words.
struct ExtremesReport {
  std::string direction_label;
  std::vector<std::pair<std::string, double>> top_positive;
  std::vector<std::pair<std::string, double>> top_negative;
  bool truncated = false;
};

/// Mean |cos(w, g)|^c over the word set; lies in [0, 1] for a unit g.
double direct_bias(const Embedding& emb, const std::vector<std::string>& words,
                   const Vec& direction, const DirectBiasParams& params);

/// Fraction of the inner product w.v attributable to the bias subspace:
///   beta(w, v) = (w.v - (w_perp . v_perp) / (|w_perp||v_perp|)) / (w.v)
/// where w_perp is w with its subspace component removed.
double indirect_bias_beta(const Embedding& emb, const std::string& w,
                          const std::string& v, const BiasSubspace& bias);

/// beta on raw unit vectors, for callers that already hold them.
double indirect_bias_beta(const Vec& w, const Vec& v, const Subspace& bias);

/// The n most positive and n most negative projections of `words` onto the
/// direction. Ties break lexicographically by token.
ExtremesReport extremes_along(const Embedding& emb, const std::vector<std::string>& words,
                              const Vec& direction, int n,
                              const std::string& label = "");

/// Accuracy of the nearest-seed-word gender classifier: a female word counts
/// as correct when strictly closer (by cosine) to `pair.first`, a male word
/// when strictly closer to `pair.second`.
double pair_classifier_accuracy(const Embedding& emb,
                                const std::pair<std::string, std::string>& pair,
                                const std::vector<std::string>& female_words,
                                const std::vector<std::string>& male_words);

}  // namespace wordbias
