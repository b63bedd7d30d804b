#pragma once

#include <Eigen/Sparse>

#include <iosfwd>
#include <vector>

namespace h2mixed {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Compresses a coordinate list; duplicate entries are summed in list order.
SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& entries);

/// max_ij |A_ij|
double max_abs(const SpMat& A);

/// max_ij |A_ij - A_ji|
double asymmetry(const SpMat& A);

/// Coordinate text export: "row col value" per line, 1-based, preceded by a
/// "rows cols nnz" header line.
void write_coordinate(std::ostream& os, const SpMat& A);

} // namespace h2mixed
