#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wordbias/embedding.hpp"
#include "wordbias/linalg.hpp"

namespace wordbias {

/// Word sets whose within-set variation is attributed to the protected
/// attribute (typically female/male pairs such as she/he).
struct DefiningSets {
  std::vector<std::vector<std::string>> sets;

  /// Throws listing every missing token; also rejects empty or singleton sets.
  void validate_against(const Embedding& emb) const;
};

/// The identified bias subspace: k orthonormal directions, the full variance
/// spectrum of the within-set scatter matrix, and the anchor pair that fixes
/// the sign of the leading direction.
class BiasSubspace {
public:
  BiasSubspace(Subspace subspace, std::vector<double> spectrum,
               std::pair<std::string, std::string> orientation_anchor);

  const Subspace& subspace() const { return subspace_; }
  int k() const { return subspace_.k(); }
  /// Leading direction g; positive projection means the anchor's first side.
  Vec g() const { return subspace_.direction(0); }
  const std::vector<double>& spectrum() const { return spectrum_; }
  const std::pair<std::string, std::string>& orientation_anchor() const {
    return anchor_;
  }

private:
  Subspace subspace_;
  std::vector<double> spectrum_;
  std::pair<std::string, std::string> anchor_;
};

/// Builds the within-set scatter matrix
///   C = sum_i sum_{w in D_i} outer(w - mu_i) / |D_i|
/// and returns its top-k eigendirections with the variance spectrum.
/// The leading direction is flipped, when needed, so that it points from the
/// anchor's second token toward its first; the default anchor is the first
/// two tokens of the first defining set.
BiasSubspace identify_bias_subspace(const Embedding& emb, const DefiningSets& defining,
                                    int k);
BiasSubspace identify_bias_subspace(const Embedding& emb, const DefiningSets& defining,
                                    int k, const std::pair<std::string, std::string>& anchor);

/// Normalized difference (a - b) / |a - b|. Errors when the vectors coincide.
Vec pair_direction(const Embedding& emb, const std::string& a, const std::string& b);

}  // namespace wordbias
