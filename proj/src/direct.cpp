#include "h2mixed/direct.hpp"

#include "h2mixed/exceptions.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace h2mixed {

struct SparseDirect::Impl {
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> A;
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, int>, Eigen::COLAMDOrdering<int>> lu;
};

SparseDirect::SparseDirect() : impl_(std::make_unique<Impl>()) {}
SparseDirect::~SparseDirect() = default;
SparseDirect::SparseDirect(SparseDirect&&) noexcept = default;
SparseDirect& SparseDirect::operator=(SparseDirect&&) noexcept = default;

void SparseDirect::factorize(const SpMat& A) {
  impl_->A = A;
  impl_->A.makeCompressed();
  impl_->lu.compute(impl_->A);
  if (impl_->lu.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
}

Eigen::VectorXd SparseDirect::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  return x;
}

void DenseDirect::factorize(const SpMat& A) {
  lu_.compute(Eigen::MatrixXd(A));
  const double rc = lu_.rcond();
  if (!(rc > 1e-14)) throw SolverError("coarse matrix is numerically singular (rcond " + std::to_string(rc) + ")");
}

Eigen::VectorXd direct_solve(const SpMat& A, const Eigen::VectorXd& b) {
  SparseDirect lu;
  lu.factorize(A);
  Eigen::VectorXd x = lu.solve(b);
  // normwise backward error |b - Ax| / (|A| |x| + |b|), infinity norms
  double anorm = 0.0;
  for (int r = 0; r < A.outerSize(); ++r) {
    double s = 0.0;
    for (SpMat::InnerIterator it(A, r); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }
  auto backward_error = [&] {
    const double den = anorm * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
    return den > 0.0 ? (b - A * x).lpNorm<Eigen::Infinity>() / den : 0.0;
  };
  double be = backward_error();
  for (int it = 0; it < 3 && be > kDirectBackwardErrorTol; ++it) {
    x += lu.solve(b - A * x);
    be = backward_error();
  }
  if (be > kDirectBackwardErrorTol) {
    std::ostringstream msg;
    msg << "direct solve backward error " << be << " exceeds " << kDirectBackwardErrorTol;
    throw SolverError(msg.str());
  }
  return x;
}

} // namespace h2mixed
