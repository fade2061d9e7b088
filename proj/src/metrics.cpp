#include "wordbias/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "wordbias/errors.hpp"

namespace wordbias {

void DirectBiasParams::validate() const {
  if (!(strictness >= 0.0) || !std::isfinite(strictness)) {
    throw ConfigError("direct bias: strictness exponent must be finite and >= 0");
  }
}

double direct_bias(const Embedding& emb, const std::vector<std::string>& words,
                   const Vec& direction, const DirectBiasParams& params) {
  params.validate();
  if (words.empty()) throw DataError("direct_bias: empty word set");
  if (!emb.normalized()) throw DataError("direct_bias: embedding must be normalized");
  double sum = 0.0;
  for (const auto& token : words) {
    const double c = std::abs(cosine(emb.vector_of(token), direction));
    if (params.strictness == 0.0) {
      // |cos|^0 counts any nonzero overlap, not the 0^0 = 1 convention.
      sum += c == 0.0 ? 0.0 : 1.0;
    } else {
      sum += std::pow(c, params.strictness);
    }
  }
  return sum / static_cast<double>(words.size());
}

double indirect_bias_beta(const Vec& w, const Vec& v, const Subspace& bias) {
  const double wv = w.dot(v);
  if (wv == 0.0) throw DataError("indirect bias: undefined, zero similarity between the words");
  const Vec w_perp = w - project_onto(w, bias);
  const Vec v_perp = v - project_onto(v, bias);
  const double nw = w_perp.norm();
  const double nv = v_perp.norm();
  if (nw < 1e-12 || nv < 1e-12) {
    throw DataError("indirect bias: a word lies entirely inside the bias subspace");
  }
  return (wv - w_perp.dot(v_perp) / (nw * nv)) / wv;
}

double indirect_bias_beta(const Embedding& emb, const std::string& w,
                          const std::string& v, const BiasSubspace& bias) {
  if (!emb.normalized()) throw DataError("indirect bias: embedding must be normalized");
  return indirect_bias_beta(emb.vector_of(w), emb.vector_of(v), bias.subspace());
}

ExtremesReport extremes_along(const Embedding& emb, const std::vector<std::string>& words,
                              const Vec& direction, int n, const std::string& label) {
  if (n < 1) throw ConfigError("extremes: n must be >= 1");
  std::vector<std::pair<std::string, double>> projections;
  projections.reserve(words.size());
  for (const auto& token : words) {
    projections.emplace_back(token, emb.vector_of(token).dot(direction));
  }
  ExtremesReport report;
  report.direction_label = label;
  report.truncated = n > static_cast<int>(words.size());
  const int take = std::min<int>(n, static_cast<int>(words.size()));

  auto descending = projections;
  std::sort(descending.begin(), descending.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  report.top_positive.assign(descending.begin(), descending.begin() + take);

  auto ascending = projections;
  std::sort(ascending.begin(), ascending.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  report.top_negative.assign(ascending.begin(), ascending.begin() + take);
  return report;
}

double pair_classifier_accuracy(const Embedding& emb,
                                const std::pair<std::string, std::string>& pair,
                                const std::vector<std::string>& female_words,
                                const std::vector<std::string>& male_words) {
  if (female_words.empty() || male_words.empty()) {
    throw DataError("pair classifier: both word sets must be nonempty");
  }
  const Vec a = emb.vector_of(pair.first);
  const Vec b = emb.vector_of(pair.second);
  long long correct = 0;
  for (const auto& token : female_words) {
    const Vec w = emb.vector_of(token);
    if (cosine(w, a) > cosine(w, b)) ++correct;
  }
  for (const auto& token : male_words) {
    const Vec w = emb.vector_of(token);
    if (cosine(w, b) > cosine(w, a)) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(female_words.size() + male_words.size());
}

}  // namespace wordbias
