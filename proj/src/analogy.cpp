#include "wordbias/analogy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wordbias/errors.hpp"

namespace wordbias {

namespace {

constexpr double kZeroDirectionTol = 1e-12;

// Exact per-pair arithmetic shared by score_pair and the generator, so the
// pruned generator emits bit-identical scores to pairwise enumeration.
double exact_score(const Vec& seed_diff, double seed_norm, const Vec& vx, const Vec& vy,
                   double delta) {
  const Vec diff = vx - vy;
  const double norm = diff.norm();
  if (norm > delta || norm < kZeroDirectionTol) return 0.0;
  return std::clamp(seed_diff.dot(diff) / (seed_norm * norm), -1.0, 1.0);
}

double exact_residual(const Vec& seed_diff, const Vec& vx, const Vec& vy) {
  return (seed_diff - (vx - vy)).norm();
}

Vec seed_difference(const Embedding& emb, const std::string& a, const std::string& b) {
  const Vec diff = emb.vector_of(a) - emb.vector_of(b);
  if (diff.norm() < kZeroDirectionTol) {
    throw DataError("analogy seed '" + a + "'/'" + b + "' gives a zero direction");
  }
  return diff;
}

struct Candidate {
  int x = -1;
  int y = -1;
  double score = 0.0;
};

void sort_pairs(std::vector<AnalogyPair>& pairs, bool descending) {
  std::sort(pairs.begin(), pairs.end(), [descending](const AnalogyPair& a, const AnalogyPair& b) {
    if (a.score != b.score) return descending ? a.score > b.score : a.score < b.score;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
}

}  // namespace

void AnalogyQuery::validate() const {
  if (!(delta > 0.0)) throw ConfigError("analogy query: delta must be > 0");
  if (top_n < 1) throw ConfigError("analogy query: top_n must be >= 1");
}

double score_pair(const Embedding& emb, const std::string& a, const std::string& b,
                  const std::string& x, const std::string& y, double delta) {
  if (!emb.normalized()) throw DataError("score_pair: embedding must be normalized");
  const Vec seed = seed_difference(emb, a, b);
  return exact_score(seed, seed.norm(), emb.vector_of(x), emb.vector_of(y), delta);
}

std::vector<AnalogyPair> generate_analogies(const Embedding& emb, const AnalogyQuery& query) {
  query.validate();
  if (!emb.normalized()) throw DataError("generate_analogies: embedding must be normalized");
  if (emb.size() < 2) throw DataError("generate_analogies: vocabulary smaller than 2");
  const Vec seed = seed_difference(emb, query.seed_a, query.seed_b);
  const double seed_norm = seed.norm();
  const int n = emb.size();

  std::vector<char> barred(n, 0);
  for (const auto& token : query.exclusions) {
    if (auto idx = emb.index_of(token)) barred[*idx] = 1;
  }
  if (query.exclude_seed) {
    barred[emb.require(query.seed_a)] = 1;
    barred[emb.require(query.seed_b)] = 1;
  }

  // Candidate pruning by squared distance computed from Gram blocks, with a
  // slack margin so the exact per-pair check makes every boundary decision.
  const double prune = query.delta * query.delta + 1e-9;
  const RowMat& m = emb.matrix();
  const int block = 256;
  std::vector<Candidate> best_per_x(n);

  for (int x0 = 0; x0 < n; x0 += block) {
    const int rows = std::min(block, n - x0);
    const Mat gram = m.middleRows(x0, rows) * m.transpose();
    for (int r = 0; r < rows; ++r) {
      const int x = x0 + r;
      if (barred[x]) continue;
      Candidate best;
      for (int y = 0; y < n; ++y) {
        if (y == x || barred[y]) continue;
        if (2.0 - 2.0 * gram(r, y) > prune) continue;
        const double score = exact_score(seed, seed_norm, m.row(x).transpose(), m.row(y).transpose(), query.delta);
        if (score <= 0.0) continue;
        if (best.y < 0 || score > best.score ||
            (score == best.score && emb.vocab()[y] < emb.vocab()[best.y])) {
          best = Candidate{x, y, score};
        }
      }
      if (best.y >= 0) best_per_x[x] = best;
    }
  }

  std::vector<AnalogyPair> pairs;
  for (const auto& c : best_per_x) {
    if (c.y >= 0) pairs.push_back({emb.vocab()[c.x], emb.vocab()[c.y], c.score});
  }
  sort_pairs(pairs, /*descending=*/true);
  if (static_cast<int>(pairs.size()) > query.top_n) pairs.resize(query.top_n);
  return pairs;
}

std::vector<AnalogyPair> parallelogram_analogies(const Embedding& emb, const std::string& a,
                                                 const std::string& b, int top_n) {
  if (top_n < 1) throw ConfigError("parallelogram: top_n must be >= 1");
  if (emb.size() < 2) throw DataError("parallelogram: vocabulary smaller than 2");
  const Vec seed = seed_difference(emb, a, b);
  const int n = emb.size();
  const int idx_a = emb.require(a);
  const int idx_b = emb.require(b);
  const RowMat& m = emb.matrix();
  const Vec row_sq = m.rowwise().squaredNorm();
  const Vec proj = m * seed;  // seed . x per row
  const double seed_sq = seed.squaredNorm();

  const int block = 256;
  std::vector<Candidate> best_per_x(n);
  for (int x0 = 0; x0 < n; x0 += block) {
    const int rows = std::min(block, n - x0);
    const Mat gram = m.middleRows(x0, rows) * m.transpose();
    for (int r = 0; r < rows; ++r) {
      const int x = x0 + r;
      if (x == idx_a) continue;
      // First pass: approximate residuals locate the near-minimal candidates.
      double approx_min = std::numeric_limits<double>::infinity();
      for (int y = 0; y < n; ++y) {
        if (y == idx_b || y == x) continue;
        const double res2 = seed_sq + row_sq[x] + row_sq[y] - 2.0 * gram(r, y) -
                            2.0 * (proj[x] - proj[y]);
        approx_min = std::min(approx_min, res2);
      }
      if (!std::isfinite(approx_min)) continue;
      const double cutoff = approx_min + 1e-6 * (1.0 + std::abs(approx_min));
      Candidate best;
      for (int y = 0; y < n; ++y) {
        if (y == idx_b || y == x) continue;
        const double res2 = seed_sq + row_sq[x] + row_sq[y] - 2.0 * gram(r, y) -
                            2.0 * (proj[x] - proj[y]);
        if (res2 > cutoff) continue;
        const double exact = exact_residual(seed, m.row(x).transpose(), m.row(y).transpose());
        if (best.y < 0 || exact < best.score ||
            (exact == best.score && emb.vocab()[y] < emb.vocab()[best.y])) {
          best = Candidate{x, y, exact};
        }
      }
      if (best.y >= 0) best_per_x[x] = best;
    }
  }

  std::vector<AnalogyPair> pairs;
  for (const auto& c : best_per_x) {
    if (c.y >= 0) pairs.push_back({emb.vocab()[c.x], emb.vocab()[c.y], c.score});
  }
  sort_pairs(pairs, /*descending=*/false);
  if (static_cast<int>(pairs.size()) > top_n) pairs.resize(top_n);
  return pairs;
}

std::string solve_cosadd(const Embedding& emb, const std::string& a, const std::string& b,
                         const std::string& x,
                         const std::unordered_set<std::string>& exclusions) {
  const Vec query = emb.vector_of(x) + emb.vector_of(b) - emb.vector_of(a);
  if (query.norm() < kZeroDirectionTol) {
    throw DataError("cosadd: query vector x + b - a is zero");
  }
  const int idx_a = emb.require(a);
  const int idx_b = emb.require(b);
  const int idx_x = emb.require(x);

  int best = -1;
  double best_cos = -2.0;
  for (int i = 0; i < emb.size(); ++i) {
    if (i == idx_a || i == idx_b || i == idx_x) continue;
    if (exclusions.count(emb.vocab()[i])) continue;
    const double c = cosine(emb.matrix().row(i).transpose(), query);
    if (best < 0 || c > best_cos || (c == best_cos && emb.vocab()[i] < emb.vocab()[best])) {
      best = i;
      best_cos = c;
    }
  }
  if (best < 0) throw DataError("cosadd: no candidate tokens remain");
  return emb.vocab()[best];
}

}  // namespace wordbias
