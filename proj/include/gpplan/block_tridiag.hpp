#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace gpplan {

/// Symmetric block-tridiagonal matrix. Only the diagonal and sub-diagonal
/// blocks are stored; the super-diagonal is implied by symmetry. There is
/// no storage for blocks beyond the first off-diagonal band.
struct BlockTridiagonal {
  std::vector<Eigen::MatrixXd> diag;      // n square blocks
  std::vector<Eigen::MatrixXd> sub_diag;  // n-1 blocks, block (i+1, i)

  int numBlocks() const { return static_cast<int>(diag.size()); }
  int blockDim() const { return diag.empty() ? 0 : static_cast<int>(diag.front().rows()); }
  int rows() const { return numBlocks() * blockDim(); }

  /// Allocates n zero blocks of size s x s.
  static BlockTridiagonal zero(int n, int s);

  Eigen::MatrixXd dense() const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
};

/// Solves A x = b for symmetric positive-definite block-tridiagonal A by
/// block Cholesky elimination (forward sweep) and back-substitution.
/// Returns std::nullopt when a pivot block is not positive-definite, so a
/// caller running a damped iteration can increase damping and retry.
std::optional<Eigen::VectorXd> solveBlockTridiagonal(const BlockTridiagonal& a,
                                                     const Eigen::VectorXd& b);

}  // namespace gpplan
