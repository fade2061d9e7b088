#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

namespace wordbias {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// Word vectors live in matrix rows, one contiguous row per token.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// k mutually orthonormal directions of R^d, stored as rows.
class Subspace {
public:
  explicit Subspace(Mat basis_rows);

  const Mat& basis() const { return basis_; }
  int k() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  Vec direction(int i) const { return basis_.row(i); }

private:
  Mat basis_;
};

/// cos(u, v) = u.v / (|u||v|), clamped to [-1, 1]. Errors on a zero vector.
double cosine(const Vec& u, const Vec& v);

/// Orthogonal projection of v onto the subspace.
Vec project_onto(const Vec& v, const Subspace& basis);

struct PcaResult {
  Subspace components;
  std::vector<double> explained_variance;  // fraction per component, descending
};

/// Top-k principal directions of the rows after centering them by their mean.
/// Sign convention: the entry of largest magnitude in each direction is
/// positive, so repeated runs produce identical output.
PcaResult principal_components(const Mat& rows, int k);

/// Mean explained-variance spectrum of m random unit vectors in R^d,
/// averaged over `trials` seeded draws. The vectors are not centered: the
/// spectrum describes their spread about the origin, matching the spectrum
/// of a single unit vector being [1.0].
std::vector<double> random_unit_spectrum_baseline(int m, int d, int trials,
                                                  std::uint64_t seed);

/// Nearest positive semidefinite matrix in Frobenius norm: eigenvalues below
/// zero are clamped. Input must be symmetric within 1e-8.
Mat psd_project(const Mat& m);

}  // namespace wordbias
