#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "synthetic.hpp"
#include "wordbias/errors.hpp"
#include "wordbias/metrics.hpp"
#include "wordbias/rng.hpp"

using namespace wordbias;

namespace {

// Embedding with a known bias axis e1 for hand-checked values.
Embedding axis_embedding() {
  RowMat rows(5, 3);
  rows.row(0) << 1, 0, 0;                                  // g itself
  rows.row(1) << 0, 1, 0;                                  // orthogonal
  rows.row(2) << 0.6, 0.8, 0;                              // mixed
  rows.row(3) << 0.5, 0, std::sqrt(0.75);                  // mixed, other plane
  rows.row(4) << 0, std::sqrt(0.5), std::sqrt(0.5);        // orthogonal to g
  return Embedding({"g", "orth", "mixed", "other", "flat"}, std::move(rows), true);
}

BiasSubspace axis_bias() {
  Mat basis(1, 3);
  basis << 1, 0, 0;
  return BiasSubspace(Subspace(basis), {1.0}, {"g", "orth"});
}

}  // namespace

TEST_CASE("direct bias") {
  const auto emb = axis_embedding();
  const Vec g = emb.vector_of("g");

  CHECK(direct_bias(emb, {"g"}, g, {1.0}) == doctest::Approx(1.0));
  CHECK(direct_bias(emb, {"g"}, g, {7.3}) == doctest::Approx(1.0));
  CHECK(direct_bias(emb, {"orth", "flat"}, g, {1.0}) == doctest::Approx(0.0));

  SUBCASE("hand-computed mixture") {
    // |cos| values: mixed 0.6, other 0.5.
    CHECK(direct_bias(emb, {"mixed", "other"}, g, {1.0}) == doctest::Approx(0.55));
    CHECK(direct_bias(emb, {"mixed", "other"}, g, {2.0}) ==
          doctest::Approx(0.5 * (0.36 + 0.25)));
  }
  SUBCASE("c = 0 counts nonzero overlaps only") {
    CHECK(direct_bias(emb, {"mixed", "orth"}, g, {0.0}) == doctest::Approx(0.5));
    CHECK(direct_bias(emb, {"orth", "flat"}, g, {0.0}) == doctest::Approx(0.0));
  }
  SUBCASE("monotone non-increasing in c") {
    double prev = 2.0;
    for (double c : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const double value = direct_bias(emb, {"mixed", "other", "orth"}, g, {c});
      CHECK(value <= prev + 1e-12);
      prev = value;
    }
  }
  SUBCASE("empty set errors") {
    CHECK_THROWS_AS(direct_bias(emb, {}, g, {1.0}), DataError);
  }
}

TEST_CASE("indirect bias beta") {
  const auto emb = axis_embedding();
  const auto bias = axis_bias();

  SUBCASE("beta(w, w) is zero to machine rounding") {
    CHECK(std::abs(indirect_bias_beta(emb, "mixed", "mixed", bias)) <= 1e-13);
    CHECK(std::abs(indirect_bias_beta(emb, "other", "other", bias)) <= 1e-13);
  }
  SUBCASE("zero bias components give beta zero to machine rounding") {
    CHECK(std::abs(indirect_bias_beta(emb, "orth", "flat", bias)) <= 1e-13);
  }
  SUBCASE("hand-derived value") {
    // w = (0.6, 0.8, 0), v = (0.5, 0, sqrt(.75)): w.v = 0.3 while the
    // perpendicular parts are orthogonal, so beta = (0.3 - 0) / 0.3 = 1.
    CHECK(indirect_bias_beta(emb, "mixed", "other", bias) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("symmetry") {
    Rng rng(3);
    Mat basis(1, 8);
    basis = rng.unit_vector(8).transpose();
    const Subspace sub(basis);
    for (int i = 0; i < 1000; ++i) {
      const Vec w = rng.unit_vector(8);
      const Vec v = rng.unit_vector(8);
      if (std::abs(w.dot(v)) < 1e-9) continue;
      CHECK(indirect_bias_beta(w, v, sub) == doctest::Approx(indirect_bias_beta(v, w, sub)));
    }
  }
  SUBCASE("degenerate inputs error") {
    CHECK_THROWS_WITH_AS(indirect_bias_beta(emb, "orth", "other", bias),
                         doctest::Contains("zero similarity"), DataError);
    CHECK_THROWS_AS(indirect_bias_beta(emb, "g", "mixed", bias), DataError);
  }
}

TEST_CASE("extremes along a direction") {
  RowMat rows(4, 2);
  rows << 1, 0, -1, 0, 0, 1, std::sqrt(0.5), std::sqrt(0.5);
  const Embedding emb({"pos", "neg", "zero", "half"}, std::move(rows), true);
  Vec e1(2);
  e1 << 1, 0;

  const auto report = extremes_along(emb, {"pos", "neg", "zero", "half"}, e1, 2, "e1");
  REQUIRE(report.top_positive.size() == 2);
  CHECK(report.top_positive[0].first == "pos");
  CHECK(report.top_positive[1].first == "half");
  CHECK(report.top_negative[0].first == "neg");
  CHECK(report.top_negative[1].first == "zero");
  CHECK_FALSE(report.truncated);

  SUBCASE("ties break lexicographically") {
    Vec e2(2);
    e2 << 0, 1;
    const auto tied = extremes_along(emb, {"pos", "neg"}, e2, 2, "e2");
    CHECK(tied.top_positive[0].first == "neg");  // both project to 0
    CHECK(tied.top_positive[1].first == "pos");
    CHECK(tied.top_negative[0].first == "neg");
  }
  SUBCASE("n beyond the word count clamps and flags") {
    const auto clamped = extremes_along(emb, {"pos", "neg"}, e1, 5, "e1");
    CHECK(clamped.truncated);
    CHECK(clamped.top_positive.size() == 2);
  }
}

TEST_CASE("pair classifier accuracy") {
  const auto emb = axis_embedding();
  CHECK(pair_classifier_accuracy(emb, {"g", "orth"}, {"g"}, {"orth"}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pair_classifier_accuracy(emb, {"g", "orth"}, {}, {"orth"}), DataError);

  SUBCASE("isotropic random words score about one half") {
    const auto iso = synthetic::random_unit_embedding(400, 16, 2024);
    std::vector<std::string> females, males;
    for (int i = 2; i < 201; ++i) females.push_back(synthetic::token_name(i));
    for (int i = 201; i < 400; ++i) males.push_back(synthetic::token_name(i));
    const double acc = pair_classifier_accuracy(iso, {"w000", "w001"}, females, males);
    CHECK(acc > 0.35);
    CHECK(acc < 0.65);
  }
}
