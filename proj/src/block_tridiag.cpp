#include "gpplan/block_tridiag.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

namespace gpplan {

BlockTridiagonal BlockTridiagonal::zero(int n, int s) {
  BlockTridiagonal m;
  m.diag.assign(n, Eigen::MatrixXd::Zero(s, s));
  if (n > 1) m.sub_diag.assign(n - 1, Eigen::MatrixXd::Zero(s, s));
  return m;
}

Eigen::MatrixXd BlockTridiagonal::dense() const {
  const int s = blockDim();
  const int n = numBlocks();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n * s, n * s);
  for (int i = 0; i < n; ++i) full.block(i * s, i * s, s, s) = diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    full.block((i + 1) * s, i * s, s, s) = sub_diag[i];
    full.block(i * s, (i + 1) * s, s, s) = sub_diag[i].transpose();
  }
  return full;
}

Eigen::VectorXd BlockTridiagonal::multiply(const Eigen::VectorXd& x) const {
  const int s = blockDim();
  const int n = numBlocks();
  if (x.size() != rows()) throw std::invalid_argument("BlockTridiagonal::multiply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < n; ++i) y.segment(i * s, s) += diag[i] * x.segment(i * s, s);
  for (int i = 0; i + 1 < n; ++i) {
    y.segment((i + 1) * s, s) += sub_diag[i] * x.segment(i * s, s);
    y.segment(i * s, s) += sub_diag[i].transpose() * x.segment((i + 1) * s, s);
  }
  return y;
}

std::optional<Eigen::VectorXd> solveBlockTridiagonal(const BlockTridiagonal& a,
                                                     const Eigen::VectorXd& b) {
  const int s = a.blockDim();
  const int n = a.numBlocks();
  if (n == 0 || b.size() != a.rows())
    throw std::invalid_argument("solveBlockTridiagonal: size mismatch");

  // Forward block-Cholesky sweep. chol[i] holds the lower factor of the
  // Schur-reduced pivot, gain[i] = E_i chol[i]^-T with E_i the sub-diagonal.
  std::vector<Eigen::LLT<Eigen::MatrixXd>> chol(n);
  std::vector<Eigen::MatrixXd> gain(std::max(n - 1, 0));
  Eigen::VectorXd y(b.size());

  Eigen::MatrixXd pivot = a.diag[0];
  for (int i = 0; i < n; ++i) {
    chol[i].compute(pivot);
    if (chol[i].info() != Eigen::Success) return std::nullopt;
    const auto lower = chol[i].matrixL();
    Eigen::VectorXd rhs = b.segment(i * s, s);
    if (i > 0) rhs -= gain[i - 1] * y.segment((i - 1) * s, s);
    y.segment(i * s, s) = lower.solve(rhs);
    if (i + 1 < n) {
      gain[i] = lower.solve(a.sub_diag[i].transpose()).transpose();
      pivot = a.diag[i + 1] - gain[i] * gain[i].transpose();
    }
  }

  // Back-substitution through the transposed factors.
  Eigen::VectorXd x(b.size());
  for (int i = n - 1; i >= 0; --i) {
    Eigen::VectorXd rhs = y.segment(i * s, s);
    if (i + 1 < n) rhs -= gain[i].transpose() * x.segment((i + 1) * s, s);
    x.segment(i * s, s) = chol[i].matrixL().transpose().solve(rhs);
  }
  return x;
}

}  // namespace gpplan
