#include "h2mixed/sparse.hpp"

#include <cmath>
#include <ostream>

namespace h2mixed {

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& entries) {
  SpMat A(rows, cols);
  A.setFromTriplets(entries.begin(), entries.end());
  A.makeCompressed();
  return A;
}

double max_abs(const SpMat& A) {
  double m = 0.0;
  for (int k = 0; k < A.nonZeros(); ++k) m = std::max(m, std::abs(A.valuePtr()[k]));
  return m;
}

double asymmetry(const SpMat& A) {
  const SpMat At = A.transpose();
  return max_abs(SpMat(A - At));
}

void write_coordinate(std::ostream& os, const SpMat& A) {
  os << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  os.precision(17);
  for (int r = 0; r < A.outerSize(); ++r)
    for (SpMat::InnerIterator it(A, r); it; ++it) os << r + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

} // namespace h2mixed
