#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wordbias/embedding.hpp"
#include "wordbias/subspace.hpp"

namespace wordbias {

/// Word sets to be made mutually symmetric about the bias subspace, e.g.
/// {grandmother, grandfather}. Sets must be pairwise disjoint, resolvable,
/// and must not overlap the neutral word list.
struct EqualitySets {
  std::vector<std::vector<std::string>> sets;

  void validate_against(const Embedding& emb) const;
  /// Additionally rejects any token shared with `neutral`.
  void validate_disjoint_from(const std::vector<std::string>& neutral) const;
};

struct SoftDebiasParams {
  double lambda = 0.2;
  int max_iters = 500;
  double step_size = 1.0;      // initial step; backtracking adapts it
  double tolerance = 1e-9;     // relative objective decrease to declare convergence
  std::uint64_t seed = 0;      // reserved; the solve itself is deterministic

  void validate() const;
};

struct SoftDebiasResult {
  Mat transform;                       // T with T^T T = X, symmetric PSD root
  Mat gram;                            // X, the optimized PSD matrix
  std::vector<double> objective_trace; // accepted objective values, non-increasing
  std::vector<double> bias_terms;      // |N^T X B|_F^2 per accepted step
  bool converged = false;
  Embedding debiased;
};

struct Observation1Report {
  double max_inner_product_gap = 0.0;
  double max_distance_gap = 0.0;
  bool pass = false;
};

/// Re-embeds every word in `neutral` as (w - w_B) / |w - w_B|: unit length
/// with no component in the bias subspace. Other rows are untouched.
Embedding neutralize(const Embedding& emb, const std::vector<std::string>& neutral,
                     const BiasSubspace& bias);

/// Centers each equality set inside the bias subspace and gives every member
/// the set's common out-of-subspace component:
///   w := nu + sqrt(1 - |nu|^2) * (w_B - mu_B) / |w_B - mu_B|
Embedding equalize(const Embedding& emb, const EqualitySets& equality,
                   const BiasSubspace& bias);

/// Neutralize then equalize. Afterwards every neutral word has equal inner
/// product with, and equal distance to, all members of each equality set.
Embedding hard_debias(const Embedding& emb, const std::vector<std::string>& neutral,
                      const EqualitySets& equality, const BiasSubspace& bias);

/// Soft correction: minimizes |W^T X W - W^T W|_F^2 + lambda |N^T X B|_F^2
/// over PSD X by projected gradient descent from X = I, evaluating the first
/// term through the singular-value reduction |S U^T (X - I) U S|_F^2.
/// Output rows are T w / |T w| with T the symmetric PSD root of X.
SoftDebiasResult soft_debias(const Embedding& emb, const std::vector<std::string>& neutral,
                             const BiasSubspace& bias, const SoftDebiasParams& params);

/// Largest inner-product and distance asymmetries over all
/// (neutral word, equality set, member pair) triples; passes at 1e-6.
Observation1Report check_observation1(const Embedding& emb,
                                      const std::vector<std::string>& neutral,
                                      const EqualitySets& equality);

}  // namespace wordbias
