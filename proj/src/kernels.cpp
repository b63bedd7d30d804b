#include "h2mixed/kernels.hpp"

namespace h2mixed::kernels {

void serial::spmv(const SpMat& A, const double* x, double* y) {
  const int* rp = A.outerIndexPtr();
  const int* ci = A.innerIndexPtr();
  const double* v = A.valuePtr();
  for (int r = 0; r < A.rows(); ++r) {
    double s = 0.0;
    for (int k = rp[r]; k < rp[r + 1]; ++k) s += v[k] * x[ci[k]];
    y[r] = s;
  }
}

void omp::spmv(const SpMat& A, const double* x, double* y) {
  const int* rp = A.outerIndexPtr();
  const int* ci = A.innerIndexPtr();
  const double* v = A.valuePtr();
  const int n = int(A.rows());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int k = rp[r]; k < rp[r + 1]; ++k) s += v[k] * x[ci[k]];
    y[r] = s;
  }
}

} // namespace h2mixed::kernels
