#include "wordbias/debias.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "wordbias/errors.hpp"

namespace wordbias {

namespace {

constexpr double kDegenerateTol = 1e-10;

Vec project_rowvec(const Vec& v, const Subspace& basis) {
  return basis.basis().transpose() * (basis.basis() * v);
}

}  // namespace

void EqualitySets::validate_against(const Embedding& emb) const {
  std::unordered_set<std::string> seen;
  for (const auto& set : sets) {
    if (set.size() < 2) throw DataError("equality sets: every set needs at least 2 tokens");
    for (const auto& token : set) {
      if (!emb.contains(token)) {
        throw DataError("equality sets: token '" + token + "' not in vocabulary");
      }
      if (!seen.insert(token).second) {
        throw DataError("equality sets: token '" + token + "' appears in two sets");
      }
    }
  }
}

void EqualitySets::validate_disjoint_from(const std::vector<std::string>& neutral) const {
  std::unordered_set<std::string> neutral_set(neutral.begin(), neutral.end());
  for (const auto& set : sets) {
    for (const auto& token : set) {
      if (neutral_set.count(token)) {
        throw ConfigError("token '" + token + "' is listed both as neutral and in an equality set");
      }
    }
  }
}

void SoftDebiasParams::validate() const {
  if (!(lambda >= 0.0)) throw ConfigError("soft debias: lambda must be >= 0");
  if (max_iters < 1) throw ConfigError("soft debias: max_iters must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("soft debias: step_size must be > 0");
  if (!(tolerance > 0.0)) throw ConfigError("soft debias: tolerance must be > 0");
}

Embedding neutralize(const Embedding& emb, const std::vector<std::string>& neutral,
                     const BiasSubspace& bias) {
  if (!emb.normalized()) throw DataError("neutralize: embedding must be normalized");
  RowMat matrix = emb.matrix();
  for (const auto& token : neutral) {
    const int idx = emb.require(token);
    const Vec w = matrix.row(idx).transpose();
    const Vec rest = w - project_rowvec(w, bias.subspace());
    const double norm = rest.norm();
    if (norm <= kDegenerateTol) {
      throw DataError("neutralize: '" + token + "' lies entirely inside the bias subspace");
    }
    matrix.row(idx) = (rest / norm).transpose();
  }
  return Embedding(emb.vocab(), std::move(matrix), true);
}

Embedding equalize(const Embedding& emb, const EqualitySets& equality,
                   const BiasSubspace& bias) {
  if (!emb.normalized()) throw DataError("equalize: embedding must be normalized");
  equality.validate_against(emb);
  RowMat matrix = emb.matrix();
  for (const auto& set : equality.sets) {
    Vec mean = Vec::Zero(emb.dim());
    for (const auto& token : set) mean += matrix.row(emb.require(token)).transpose();
    mean /= static_cast<double>(set.size());
    const Vec mean_b = project_rowvec(mean, bias.subspace());
    const Vec nu = mean - mean_b;
    const double nu_sq = nu.squaredNorm();
    if (nu_sq > 1.0 + 1e-12) {
      throw DataError("equalize: equality set mean lies outside the unit ball");
    }
    const double scale = std::sqrt(std::max(0.0, 1.0 - nu_sq));
    for (const auto& token : set) {
      const int idx = emb.require(token);
      const Vec w_b = project_rowvec(matrix.row(idx).transpose(), bias.subspace());
      const Vec centered = w_b - mean_b;
      const double norm = centered.norm();
      if (norm <= kDegenerateTol) {
        throw DataError("equalize: degenerate in-subspace position for '" + token + "'");
      }
      matrix.row(idx) = (nu + scale * centered / norm).transpose();
    }
  }
  return Embedding(emb.vocab(), std::move(matrix), true);
}

Embedding hard_debias(const Embedding& emb, const std::vector<std::string>& neutral,
                      const EqualitySets& equality, const BiasSubspace& bias) {
  equality.validate_disjoint_from(neutral);
  return equalize(neutralize(emb, neutral, bias), equality, bias);
}

SoftDebiasResult soft_debias(const Embedding& emb, const std::vector<std::string>& neutral,
                             const BiasSubspace& bias, const SoftDebiasParams& params) {
  params.validate();
  if (!emb.normalized()) throw DataError("soft debias: embedding must be normalized");
  if (neutral.empty()) throw DataError("soft debias: empty neutral word set");
  const int d = emb.dim();

  // Singular pairs of the d x |V| word matrix, obtained from its Gram matrix:
  // W W^T = U S^2 U^T, so the reduced first term only needs U and S. Zero
  // singular values stay as zeros; nothing is inverted.
  const Mat word_gram = emb.matrix().transpose() * emb.matrix();  // d x d
  Eigen::SelfAdjointEigenSolver<Mat> eig(word_gram);
  if (eig.info() != Eigen::Success) throw InternalError("soft debias: eigensolver failed");
  const Mat u = eig.eigenvectors();
  const Vec sigma = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();

  Mat neutral_mat(d, static_cast<Eigen::Index>(neutral.size()));  // columns are words
  for (std::size_t i = 0; i < neutral.size(); ++i) {
    neutral_mat.col(static_cast<Eigen::Index>(i)) = emb.vector_of(neutral[i]);
  }
  const Mat basis_cols = bias.subspace().basis().transpose();  // d x k

  const Mat nn = neutral_mat * neutral_mat.transpose();  // d x d
  const Mat bb = basis_cols * basis_cols.transpose();    // d x d
  const Mat h = u * sigma.array().square().matrix().asDiagonal() * u.transpose();  // = W W^T

  const auto bias_term = [&](const Mat& x) {
    return (neutral_mat.transpose() * x * basis_cols).squaredNorm();
  };
  const auto objective = [&](const Mat& x) {
    const Mat inner = u.transpose() * (x - Mat::Identity(d, d)) * u;
    const double preserve = (sigma.asDiagonal() * inner * sigma.asDiagonal()).squaredNorm();
    return preserve + params.lambda * bias_term(x);
  };
  const auto gradient = [&](const Mat& x) {
    const Mat g1 = 2.0 * h * (x - Mat::Identity(d, d)) * h;
    const Mat g2 = params.lambda * (nn * x * bb + bb * x * nn);
    return Mat(g1 + g2);
  };
  // Both terms are quadratics in X, so along a ray X + tD the objective is
  // a parabola whose curvature has this closed form.
  const auto curvature_along = [&](const Mat& dir) {
    const Mat inner = u.transpose() * dir * u;
    return (sigma.asDiagonal() * inner * sigma.asDiagonal()).squaredNorm() +
           params.lambda * (neutral_mat.transpose() * dir * basis_cols).squaredNorm();
  };

  // Start from the better of the two limiting solutions: the identity
  // (lambda -> 0) and the projector that removes the bias subspace
  // (lambda -> infinity).
  Mat x = Mat::Identity(d, d);
  double value = objective(x);
  {
    const Mat removed = Mat::Identity(d, d) - bb;
    const double removed_value = objective(removed);
    if (removed_value < value) {
      x = removed;
      value = removed_value;
    }
  }
  SoftDebiasResult result{Mat(), Mat(), {value}, {bias_term(x)}, false, emb};

  for (int iter = 0; iter < params.max_iters; ++iter) {
    const Mat grad = gradient(x);
    const double grad_sq = grad.squaredNorm();
    const double curve = curvature_along(grad);
    if (grad_sq <= 0.0 || curve <= 0.0) {
      result.converged = true;
      break;
    }
    double step = params.step_size * grad_sq / (2.0 * curve);  // exact 1-D minimizer
    bool accepted = false;
    while (step > 1e-20) {
      const Mat candidate = x - step * grad;
      const Mat trial = psd_project(0.5 * (candidate + candidate.transpose()));
      const double trial_value = objective(trial);
      if (trial_value <= value) {
        const double drop = value - trial_value;
        x = trial;
        value = trial_value;
        result.objective_trace.push_back(value);
        result.bias_terms.push_back(bias_term(x));
        accepted = true;
        if (drop <= params.tolerance * std::max(1.0, std::abs(value))) {
          result.converged = true;
        }
        break;
      }
      step *= 0.5;
    }
    if (!accepted || result.converged) {
      if (!accepted) result.converged = true;  // no descent direction left
      break;
    }
  }

  Eigen::SelfAdjointEigenSolver<Mat> xeig(x);
  if (xeig.info() != Eigen::Success) throw InternalError("soft debias: root eigensolver failed");
  const Vec root = xeig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat transform = xeig.eigenvectors() * root.asDiagonal() * xeig.eigenvectors().transpose();

  RowMat rows(emb.size(), d);
  for (int i = 0; i < emb.size(); ++i) {
    const Vec mapped = transform * emb.matrix().row(i).transpose();
    const double norm = mapped.norm();
    if (norm < 1e-12) {
      throw DataError("soft debias: transform annihilates token '" + emb.vocab()[i] + "'");
    }
    rows.row(i) = (mapped / norm).transpose();
  }

  result.transform = transform;
  result.gram = x;
  result.debiased = Embedding(emb.vocab(), std::move(rows), true);
  return result;
}

Observation1Report check_observation1(const Embedding& emb,
                                      const std::vector<std::string>& neutral,
                                      const EqualitySets& equality) {
  Observation1Report report;
  for (const auto& token : neutral) {
    const Vec w = emb.vector_of(token);
    for (const auto& set : equality.sets) {
      for (std::size_t i = 0; i < set.size(); ++i) {
        const Vec e1 = emb.vector_of(set[i]);
        for (std::size_t j = i + 1; j < set.size(); ++j) {
          const Vec e2 = emb.vector_of(set[j]);
          report.max_inner_product_gap =
              std::max(report.max_inner_product_gap, std::abs(w.dot(e1) - w.dot(e2)));
          report.max_distance_gap = std::max(
              report.max_distance_gap, std::abs((w - e1).norm() - (w - e2).norm()));
        }
      }
    }
  }
  report.pass = report.max_inner_product_gap <= 1e-6 && report.max_distance_gap <= 1e-6;
  return report;
}

}  // namespace wordbias
