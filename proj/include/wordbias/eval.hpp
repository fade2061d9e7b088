#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wordbias/debias.hpp"
#include "wordbias/embedding.hpp"
#include "wordbias/metrics.hpp"
#include "wordbias/subspace.hpp"

namespace wordbias {

struct SimilarityTriple {
  std::string a;
  std::string b;
  double human_score = 0.0;
};

struct SimilarityDataset {
  std::string name;
  std::vector<SimilarityTriple> triples;
};

struct AnalogyQuad {
  std::string a;
  std::string b;
  std::string x;
  std::string y_expected;
};

struct AnalogyDataset {
  std::string name;
  std::vector<AnalogyQuad> quads;
};

/// "token_a<TAB>token_b<TAB>score" per line.
SimilarityDataset load_similarity_dataset(const std::string& path, const std::string& name);

/// "a b x y" per line; lines starting with ':' are section headers and are
/// ignored.
AnalogyDataset load_analogy_dataset(const std::string& path, const std::string& name);

struct BenchmarkScore {
  double value = 0.0;  // spearman: correlation x 100; analogy: fraction in [0,1]
  int used = 0;
  int skipped_oov = 0;
};

/// Spearman rank correlation (average ranks on ties) between embedding
/// cosines and human scores, scaled by 100 for parity with published tables.
/// Pairs with an out-of-vocabulary token are skipped and counted.
BenchmarkScore spearman_similarity(const Embedding& emb, const SimilarityDataset& ds);

/// Fraction of quads whose cosadd solution equals the expected word; quads
/// with any out-of-vocabulary token are skipped and counted.
BenchmarkScore analogy_accuracy(const Embedding& emb, const AnalogyDataset& ds);

struct BiasReportInputs {
  std::vector<SimilarityDataset> similarity_datasets;
  std::optional<AnalogyDataset> analogy_dataset;
  std::vector<std::string> audit_words;  // scored by DirectBias and extremes
  DirectBiasParams direct_bias;
  int extremes_n = 10;
  /// When present, the Observation-1 check runs on both embeddings over
  /// these sets and the audit words.
  std::optional<EqualitySets> equality_sets;
};

struct BenchmarkComparison {
  std::string dataset;
  BenchmarkScore before;
  BenchmarkScore after;
};

/// Side-by-side audit of an embedding and its debiased counterpart. The bias
/// subspace is measured once (on the original) so both columns project onto
/// the same axis.
struct BiasReport {
  int schema = 1;
  std::string vocabulary_note;
  std::vector<double> spectrum;  // leading entries of the subspace spectrum
  std::vector<BenchmarkComparison> benchmarks;
  double direct_bias_before = 0.0;
  double direct_bias_after = 0.0;
  ExtremesReport extremes_before;
  ExtremesReport extremes_after;
  std::optional<Observation1Report> observation1_before;
  std::optional<Observation1Report> observation1_after;
};

BiasReport before_after_report(const Embedding& original, const Embedding& debiased,
                               const BiasSubspace& bias, const BiasReportInputs& inputs);

/// Deterministic JSON rendering of the report (no timestamps; callers add
/// run metadata).
std::string report_to_json(const BiasReport& report);

/// CSV with one row per embedding and one column per benchmark.
std::string report_table_csv(const BiasReport& report);

}  // namespace wordbias
