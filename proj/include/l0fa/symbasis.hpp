#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace l0fa {

/// Orthonormal basis of the symmetric p x p matrices under the trace inner
/// product. Element a corresponds to the upper-triangular pair (i, j), i <= j,
/// enumerated row by row: E_a = e_i e_i^T on the diagonal and
/// (e_i e_j^T + e_j e_i^T) / sqrt(2) off it.
///
/// Immutable after construction; share freely.
class BasisSet {
 public:
  explicit BasisSet(int p);

  int p() const noexcept { return p_; }
  int m() const noexcept { return m_; }

  /// Row/column pair of basis element a.
  std::pair<int, int> pair(int a) const { return pairs_[static_cast<std::size_t>(a)]; }
  bool is_diagonal(int a) const { return pairs_[static_cast<std::size_t>(a)].first == pairs_[static_cast<std::size_t>(a)].second; }

  /// Coordinate index of the unordered pair {i, j}.
  int index_of(int i, int j) const;

  /// Dense p x p matrix of element a.
  Eigen::MatrixXd element(int a) const;

  /// s_a = <S, E_a>. Throws Shape if S is not p x p or not symmetric to a
  /// relative 1e-12.
  Eigen::VectorXd to_vec(const Eigen::MatrixXd& S) const;

  /// sum_a s_a E_a. Throws Shape on a length mismatch.
  Eigen::MatrixXd to_mat(const Eigen::VectorXd& s) const;

  /// <E_a, X> for arbitrary square X, using only its symmetric part.
  /// Skips the symmetry check; used for gradients assembled from
  /// inverses that are symmetric only up to rounding.
  Eigen::VectorXd project(const Eigen::MatrixXd& X) const;

  /// Gram-type matrix G[a,b] = tr(E_a X E_b X) for symmetric X, m x m.
  /// This is the coordinate Hessian of -log det at a point with inverse X.
  Eigen::MatrixXd congruence_gram(const Eigen::MatrixXd& X) const;

 private:
  int p_;
  int m_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<double> weights_;  // 1/2 on the diagonal, 1/sqrt(2) off it
  Eigen::MatrixXi index_;
};

inline constexpr double kSymmetryTolerance = 1e-12;

Eigen::VectorXd mat_to_vec(const Eigen::MatrixXd& S, const BasisSet& basis);
Eigen::MatrixXd vec_to_mat(const Eigen::VectorXd& s, const BasisSet& basis);

/// Max |S - S^T| relative to max |S| (0 for the zero matrix).
double relative_asymmetry(const Eigen::MatrixXd& S);

}  // namespace l0fa
