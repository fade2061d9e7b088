#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "synthetic.hpp"
#include "wordbias/analogy.hpp"
#include "wordbias/errors.hpp"

using namespace wordbias;

namespace {

// Exhaustive reference for Eq.-1 generation: score every ordered pair with
// score_pair, rank, then emit greedily with one pair per distinct x.
std::vector<AnalogyPair> enumerate_reference(const Embedding& emb, const AnalogyQuery& q) {
  std::vector<AnalogyPair> all;
  for (const auto& x : emb.vocab()) {
    if (q.exclusions.count(x)) continue;
    if (q.exclude_seed && (x == q.seed_a || x == q.seed_b)) continue;
    for (const auto& y : emb.vocab()) {
      if (y == x) continue;
      if (q.exclusions.count(y)) continue;
      if (q.exclude_seed && (y == q.seed_a || y == q.seed_b)) continue;
      const double s = score_pair(emb, q.seed_a, q.seed_b, x, y, q.delta);
      if (s > 0.0) all.push_back({x, y, s});
    }
  }
  std::sort(all.begin(), all.end(), [](const AnalogyPair& a, const AnalogyPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  std::vector<AnalogyPair> out;
  for (const auto& pair : all) {
    if (static_cast<int>(out.size()) >= q.top_n) break;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const AnalogyPair& p) { return p.x == pair.x; });
    if (!seen) out.push_back(pair);
  }
  return out;
}

std::vector<AnalogyPair> parallelogram_reference(const Embedding& emb, const std::string& a,
                                                 const std::string& b, int top_n) {
  const Vec seed = emb.vector_of(a) - emb.vector_of(b);
  std::vector<AnalogyPair> all;
  for (const auto& x : emb.vocab()) {
    if (x == a) continue;
    for (const auto& y : emb.vocab()) {
      if (y == b || y == x) continue;
      const double norm = (seed - (emb.vector_of(x) - emb.vector_of(y))).norm();
      all.push_back({x, y, norm});
    }
  }
  std::sort(all.begin(), all.end(), [](const AnalogyPair& l, const AnalogyPair& r) {
    if (l.score != r.score) return l.score < r.score;
    if (l.x != r.x) return l.x < r.x;
    return l.y < r.y;
  });
  std::vector<AnalogyPair> out;
  for (const auto& pair : all) {
    if (static_cast<int>(out.size()) >= top_n) break;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const AnalogyPair& p) { return p.x == pair.x; });
    if (!seen) out.push_back(pair);
  }
  return out;
}

void check_equal(const std::vector<AnalogyPair>& got, const std::vector<AnalogyPair>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].x == want[i].x);
    CHECK(got[i].y == want[i].y);
    CHECK(got[i].score == want[i].score);
  }
}

}  // namespace

TEST_CASE("score_pair follows the thresholded cosine") {
  // Four unit vectors in R^3 with hand-known geometry.
  RowMat rows(4, 3);
  rows.row(0) << 1, 0, 0;  // a
  rows.row(1) << 0, 1, 0;  // b
  rows.row(2) << 0, 0, 1;  // x
  rows.row(3) << std::sqrt(0.5), std::sqrt(0.5), 0;
  const Embedding emb({"a", "b", "x", "m"}, std::move(rows), true);

  SUBCASE("the seed pair scores 1 when within the threshold") {
    CHECK(score_pair(emb, "a", "b", "a", "b", 1.5) == doctest::Approx(1.0));
    CHECK(score_pair(emb, "a", "b", "a", "b", 1.0) == 0.0);  // |a-b| = sqrt(2) > 1
  }
  SUBCASE("closed-form cosine for a hand-built pair") {
    // a-b = (1,-1,0); x-m = (-sqrt(.5), -sqrt(.5), 1): dot = -1+sqrt(.5)... use (m,x):
    // m-x = (sqrt(.5), sqrt(.5), -1), dot with (1,-1,0) = 0 -> score 0.
    CHECK(score_pair(emb, "a", "b", "m", "x", 2.0) == doctest::Approx(0.0));
    // x-m gives dot 0 too; use pair (a,m): a-m = (1-sqrt(.5), -sqrt(.5), 0),
    // cos with (1,-1,0) = (1-sqrt(.5)+sqrt(.5)) / (sqrt(2)*|a-m|) = 1/(sqrt(2)*|a-m|).
    const double am = std::sqrt((1 - std::sqrt(0.5)) * (1 - std::sqrt(0.5)) + 0.5);
    CHECK(score_pair(emb, "a", "b", "a", "m", 2.0) ==
          doctest::Approx(1.0 / (std::sqrt(2.0) * am)).epsilon(1e-10));
  }
  SUBCASE("coincident pair vectors score zero") {
    RowMat dup(3, 2);
    dup << 1, 0, 1, 0, 0, 1;
    const Embedding same({"p", "q", "r"}, std::move(dup), true);
    CHECK(score_pair(same, "p", "r", "p", "q", 2.0) == 0.0);
  }
}

TEST_CASE("generator matches exhaustive enumeration on random vocabularies") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto emb = synthetic::random_unit_embedding(60, 6, seed);
    AnalogyQuery q{"w000", "w001", 1.0, 10, {"w005", "w006"}, true};
    check_equal(generate_analogies(emb, q), enumerate_reference(emb, q));

    SUBCASE("also with seeds allowed back in") {}
    q.exclude_seed = false;
    q.top_n = 25;
    check_equal(generate_analogies(emb, q), enumerate_reference(emb, q));
  }
}

TEST_CASE("generator honors delta and emits positive scores, one per x") {
  const auto emb = synthetic::random_unit_embedding(40, 5, 9);
  AnalogyQuery q{"w000", "w001", 1.2, 100, {}, true};
  const auto pairs = generate_analogies(emb, q);
  REQUIRE(!pairs.empty());
  std::vector<std::string> seen;
  double prev = 2.0;
  for (const auto& p : pairs) {
    CHECK(p.score > 0.0);
    CHECK(p.score <= prev + 1e-15);
    prev = p.score;
    CHECK((emb.vector_of(p.x) - emb.vector_of(p.y)).norm() <= q.delta);
    CHECK(p.x != "w000");
    CHECK(p.x != "w001");
    CHECK(std::find(seen.begin(), seen.end(), p.x) == seen.end());
    seen.push_back(p.x);
    // The emitted score is exactly the Eq.-1 score.
    CHECK(p.score == score_pair(emb, "w000", "w001", p.x, p.y, q.delta));
    // Mirrored seeds score the mirrored pair identically.
    CHECK(score_pair(emb, "w001", "w000", p.y, p.x, q.delta) == p.score);
  }

  SUBCASE("delta -> 0 empties the list") {
    q.delta = 1e-9;
    CHECK(generate_analogies(emb, q).empty());
  }
  SUBCASE("tiny vocabulary errors") {
    RowMat one(1, 2);
    one << 1, 0;
    const Embedding single({"a"}, std::move(one), true);
    CHECK_THROWS_AS(generate_analogies(single, AnalogyQuery{"a", "a", 1.0, 5, {}, true}),
                    DataError);
  }
}

TEST_CASE("parallelogram baseline matches exhaustive minimization") {
  for (std::uint64_t seed : {4ull, 5ull}) {
    const auto emb = synthetic::random_unit_embedding(45, 5, seed);
    check_equal(parallelogram_analogies(emb, "w000", "w001", 12),
                parallelogram_reference(emb, "w000", "w001", 12));
  }
  SUBCASE("x equal to y never appears") {
    const auto emb = synthetic::random_unit_embedding(30, 4, 6);
    for (const auto& p : parallelogram_analogies(emb, "w000", "w001", 50)) {
      CHECK(p.x != p.y);
      CHECK(p.x != "w000");
      CHECK(p.y != "w001");
    }
  }
}

TEST_CASE("cosadd solver") {
  SUBCASE("an exact target vector wins") {
    RowMat rows(5, 3);
    rows.row(0) << 1, 0, 0;                      // a
    rows.row(1) << 0, 1, 0;                      // b
    rows.row(2) << 0, 0, 1;                      // x
    Vec target(3);
    target << -1, 1, 1;                          // x + b - a
    rows.row(3) = (target / target.norm()).transpose();
    rows.row(4) << std::sqrt(0.5), 0, std::sqrt(0.5);
    const Embedding emb({"a", "b", "x", "target", "decoy"}, std::move(rows), true);
    CHECK(solve_cosadd(emb, "a", "b", "x") == "target");
    CHECK(solve_cosadd(emb, "a", "b", "x", {"target"}) == "decoy");
  }
  SUBCASE("matches brute force on a random vocabulary") {
    const auto emb = synthetic::random_unit_embedding(20, 6, 8);
    const Vec query = emb.vector_of("w002") + emb.vector_of("w001") - emb.vector_of("w000");
    std::string best;
    double best_cos = -2.0;
    for (const auto& token : emb.vocab()) {
      if (token == "w000" || token == "w001" || token == "w002") continue;
      const double c = cosine(emb.vector_of(token), query);
      if (c > best_cos) {
        best_cos = c;
        best = token;
      }
    }
    CHECK(solve_cosadd(emb, "w000", "w001", "w002") == best);
  }
  SUBCASE("an empty candidate set errors") {
    RowMat rows(3, 2);
    rows << 1, 0, 0, 1, std::sqrt(0.5), std::sqrt(0.5);
    const Embedding emb({"a", "b", "x"}, std::move(rows), true);
    CHECK_THROWS_AS(solve_cosadd(emb, "a", "b", "x"), DataError);
  }
}
