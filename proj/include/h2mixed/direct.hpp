#pragma once

#include "h2mixed/sparse.hpp"

#include <Eigen/Dense>

#include <memory>

namespace h2mixed {

/// Sparse LU with partial pivoting and COLAMD ordering. No symmetry assumption.
class SparseDirect {
public:
  SparseDirect();
  ~SparseDirect();
  SparseDirect(SparseDirect&&) noexcept;
  SparseDirect& operator=(SparseDirect&&) noexcept;

  /// Throws SolverError when the matrix is singular.
  void factorize(const SpMat& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Dense LU with partial pivoting, used on the coarsest multigrid level.
class DenseDirect {
public:
  void factorize(const SpMat& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return lu_.solve(b); }

private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

constexpr double kDirectBackwardErrorTol = 1e-12;

/// Solves A x = b, refining until the normwise backward error
/// ||b - Ax|| / (||A|| ||x|| + ||b||) is at most kDirectBackwardErrorTol.
Eigen::VectorXd direct_solve(const SpMat& A, const Eigen::VectorXd& b);

} // namespace h2mixed
