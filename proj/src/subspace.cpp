#include "wordbias/subspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wordbias/errors.hpp"

namespace wordbias {

void DefiningSets::validate_against(const Embedding& emb) const {
  if (sets.empty()) throw DataError("defining sets: no sets given");
  std::vector<std::string> missing;
  for (const auto& set : sets) {
    if (set.size() < 2) throw DataError("defining sets: every set needs at least 2 tokens");
    for (const auto& token : set) {
      if (!emb.contains(token)) missing.push_back(token);
    }
  }
  if (!missing.empty()) {
    std::string msg = "defining sets: missing tokens:";
    for (const auto& t : missing) msg += " '" + t + "'";
    throw DataError(msg);
  }
}

BiasSubspace::BiasSubspace(Subspace subspace, std::vector<double> spectrum,
                           std::pair<std::string, std::string> orientation_anchor)
    : subspace_(std::move(subspace)),
      spectrum_(std::move(spectrum)),
      anchor_(std::move(orientation_anchor)) {}

BiasSubspace identify_bias_subspace(const Embedding& emb, const DefiningSets& defining,
                                    int k) {
  if (defining.sets.empty() || defining.sets.front().size() < 2) {
    throw DataError("defining sets: need a first set with at least 2 tokens");
  }
  return identify_bias_subspace(emb, defining, k,
                                {defining.sets.front()[0], defining.sets.front()[1]});
}

BiasSubspace identify_bias_subspace(const Embedding& emb, const DefiningSets& defining,
                                    int k, const std::pair<std::string, std::string>& anchor) {
  if (!emb.normalized()) throw DataError("identify_bias_subspace: embedding must be normalized");
  if (k < 1) throw DataError("identify_bias_subspace: k must be >= 1");
  defining.validate_against(emb);
  const int d = emb.dim();

  Mat scatter = Mat::Zero(d, d);
  for (const auto& set : defining.sets) {
    Mat rows(static_cast<Eigen::Index>(set.size()), d);
    for (std::size_t i = 0; i < set.size(); ++i) {
      rows.row(static_cast<Eigen::Index>(i)) = emb.vector_of(set[i]).transpose();
    }
    Mat centered = rows.rowwise() - rows.colwise().mean();
    scatter += centered.transpose() * centered / static_cast<double>(set.size());
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(scatter);
  if (eig.info() != Eigen::Success) {
    throw InternalError("identify_bias_subspace: eigensolver failed");
  }
  // SelfAdjointEigenSolver sorts ascending; we want descending.
  Vec values = eig.eigenvalues().reverse();
  Mat vectors = eig.eigenvectors().rowwise().reverse();

  const double trace = std::max(values.cwiseMax(0.0).sum(), 0.0);
  if (trace <= 0.0) throw DataError("identify_bias_subspace: zero scatter (all sets degenerate)");
  const double rank_tol = values[0] * 1e-12;
  int rank = 0;
  while (rank < d && values[rank] > rank_tol) ++rank;
  if (k > rank) {
    throw DataError("identify_bias_subspace: k=" + std::to_string(k) +
                    " exceeds scatter rank " + std::to_string(rank));
  }

  Mat basis(k, d);
  for (int i = 0; i < k; ++i) {
    Vec dir = vectors.col(i);
    Eigen::Index jmax;
    dir.cwiseAbs().maxCoeff(&jmax);
    if (dir[jmax] < 0.0) dir = -dir;
    basis.row(i) = dir.transpose();
  }

  // Orient the leading direction along anchor.first - anchor.second.
  const Vec anchor_diff = emb.vector_of(anchor.first) - emb.vector_of(anchor.second);
  if (basis.row(0).dot(anchor_diff) < 0.0) basis.row(0) = -basis.row(0);

  std::vector<double> spectrum(d);
  for (int i = 0; i < d; ++i) spectrum[i] = std::max(values[i], 0.0) / trace;

  return BiasSubspace(Subspace(std::move(basis)), std::move(spectrum), anchor);
}

Vec pair_direction(const Embedding& emb, const std::string& a, const std::string& b) {
  const Vec diff = emb.vector_of(a) - emb.vector_of(b);
  const double norm = diff.norm();
  if (norm < 1e-12) {
    throw DataError("pair_direction: '" + a + "' and '" + b + "' give a zero direction");
  }
  return diff / norm;
}

}  // namespace wordbias
