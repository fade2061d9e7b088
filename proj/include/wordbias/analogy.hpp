#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "wordbias/embedding.hpp"

namespace wordbias {

/// Seed pair and limits for pair-analogy generation.
struct AnalogyQuery {
  std::string seed_a;
  std::string seed_b;
  double delta = 1.0;  // |x - y| threshold; 1.0 keeps word pairs within pi/3
  int top_n = 100;
  std::unordered_set<std::string> exclusions;
  /// When false the seed words may reappear as x or y (strict-paper mode);
  /// by default an analogy never reuses its own seed.
  bool exclude_seed = true;

  void validate() const;
};

struct AnalogyPair {
  std::string x;
  std::string y;
  double score = 0.0;
};

/// cos(a - b, x - y) when |x - y| <= delta, otherwise 0. A coincident
/// (x, y) pair scores 0 rather than erroring.
double score_pair(const Embedding& emb, const std::string& a, const std::string& b,
                  const std::string& x, const std::string& y, double delta);

/// All positive-scoring pairs ranked by score (ties by (x, y) lexicographic),
/// keeping at most one pair per distinct x, truncated to top_n.
std::vector<AnalogyPair> generate_analogies(const Embedding& emb, const AnalogyQuery& query);

/// Baseline ranking by the parallelogram residual |(a - b) - (x - y)|,
/// ascending, over x != a, y != b, x != y, one pair per distinct x.
/// The stored score is the residual norm.
std::vector<AnalogyPair> parallelogram_analogies(const Embedding& emb, const std::string& a,
                                                 const std::string& b, int top_n);

/// Single-word analogy solver: argmax over the vocabulary of
/// cos(y, x + b - a), skipping the three query words and the exclusions.
std::string solve_cosadd(const Embedding& emb, const std::string& a, const std::string& b,
                         const std::string& x,
                         const std::unordered_set<std::string>& exclusions = {});

}  // namespace wordbias
