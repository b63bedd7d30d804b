#pragma once

#include "h2mixed/sparse.hpp"

#include <utility>

namespace h2mixed {

/// Selects the serial reference kernels or their OpenMP counterparts.
/// Both produce bitwise identical results.
enum class ExecPolicy { Serial, OpenMP };

namespace kernels {

namespace serial {
void spmv(const SpMat& A, const double* x, double* y);
} // namespace serial

namespace omp {
void spmv(const SpMat& A, const double* x, double* y);
} // namespace omp

inline void spmv(ExecPolicy p, const SpMat& A, const double* x, double* y) {
  p == ExecPolicy::Serial ? serial::spmv(A, x, y) : omp::spmv(A, x, y);
}

/// Runs f(i) for i in [0, n). Iterations must write disjoint memory.
template <class F>
void parallel_for(ExecPolicy p, int n, F&& f) {
  if (p == ExecPolicy::Serial) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) f(i);
}

} // namespace kernels
} // namespace h2mixed
