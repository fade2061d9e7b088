#include "wordbias/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "wordbias/errors.hpp"
#include "wordbias/rng.hpp"

namespace wordbias {

namespace {

constexpr double kOrthoTol = 1e-8;

// Flips each row so its entry of largest magnitude is positive.
void canonicalize_signs(Mat& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::Index j;
    rows.row(i).cwiseAbs().maxCoeff(&j);
    if (rows(i, j) < 0.0) rows.row(i) = -rows.row(i);
  }
}

std::vector<double> spectrum_fractions(const Vec& singular_values, int count) {
  const double total = singular_values.array().square().sum();
  if (total <= 0.0) throw DataError("principal components: zero variance input");
  std::vector<double> fractions(count);
  for (int i = 0; i < count; ++i) {
    const double s = i < singular_values.size() ? singular_values[i] : 0.0;
    fractions[i] = s * s / total;
  }
  return fractions;
}

}  // namespace

Subspace::Subspace(Mat basis_rows) : basis_(std::move(basis_rows)) {
  if (basis_.rows() < 1) throw DataError("subspace needs at least one direction");
  const Mat gram = basis_ * basis_.transpose();
  const Mat err = gram - Mat::Identity(basis_.rows(), basis_.rows());
  if (err.cwiseAbs().maxCoeff() > kOrthoTol) {
    throw DataError("subspace basis is not orthonormal");
  }
}

double cosine(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw DataError("cosine: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw DataError("cosine: zero vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

Vec project_onto(const Vec& v, const Subspace& basis) {
  if (v.size() != basis.dim()) throw DataError("project_onto: dimension mismatch");
  return basis.basis().transpose() * (basis.basis() * v);
}

PcaResult principal_components(const Mat& rows, int k) {
  const int m = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  if (m < 1) throw DataError("principal components: empty input");
  if (k < 1 || k > std::min(m, d)) {
    throw DataError("principal components: k=" + std::to_string(k) +
                    " exceeds min(rows, dim)=" + std::to_string(std::min(m, d)));
  }
  Mat centered = rows.rowwise() - rows.colwise().mean();
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeThinV);
  auto fractions = spectrum_fractions(svd.singularValues(), static_cast<int>(svd.singularValues().size()));
  Mat basis = svd.matrixV().leftCols(k).transpose();
  canonicalize_signs(basis);
  return PcaResult{Subspace(std::move(basis)),
                   std::vector<double>(fractions.begin(), fractions.begin() + k)};
}

std::vector<double> random_unit_spectrum_baseline(int m, int d, int trials,
                                                  std::uint64_t seed) {
  if (m < 1 || d < 1) throw DataError("spectrum baseline: m and d must be positive");
  if (trials < 1) throw DataError("spectrum baseline: trials must be positive");
  Rng rng(seed);
  std::vector<double> mean(m, 0.0);
  Mat draws(m, d);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < m; ++i) draws.row(i) = rng.unit_vector(d).transpose();
    Eigen::JacobiSVD<Mat> svd(draws);
    const auto fractions = spectrum_fractions(svd.singularValues(), m);
    for (int i = 0; i < m; ++i) mean[i] += fractions[i];
  }
  for (double& f : mean) f /= trials;
  return mean;
}

Mat psd_project(const Mat& m) {
  if (m.rows() != m.cols()) throw DataError("psd_project: matrix not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kOrthoTol) {
    throw DataError("psd_project: matrix not symmetric");
  }
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  if (eig.info() != Eigen::Success) throw InternalError("psd_project: eigensolver failed");
  const Vec clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace wordbias
