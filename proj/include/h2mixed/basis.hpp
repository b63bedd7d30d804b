#pragma once

#include "h2mixed/mesh.hpp"

#include <Eigen/Dense>

#include <vector>

namespace h2mixed {

constexpr int kMaxDGOrder = 3;

inline int dg_dim(int k) { return (k + 1) * (k + 2) / 2; }
/// RT_{k1} on a triangle: k1 normal moments per edge, k1(k1-1) interior moments.
inline int rt_edge_dofs(int k1) { return k1; }
inline int rt_interior_dofs(int k1) { return k1 * (k1 - 1); }
inline int rt_dim(int k1) { return k1 * (k1 + 2); }

/// Nodal Lagrange basis of degree k on the reference triangle.
/// Nodes: vertices, then edge nodes (edge i opposite vertex i, walked
/// counter-clockwise), then interior lattice points. k = 0 uses the centroid.
class DGElement {
public:
  explicit DGElement(int k);

  int order() const { return k_; }
  int dim() const { return dim_; }
  const std::vector<Point>& nodes() const { return nodes_; }

  /// values(i) = phi_i(xi)
  void eval(Point xi, double* values) const;
  /// grads(i) = reference gradient of phi_i at xi
  void eval_grad(Point xi, Point* grads) const;

private:
  int k_;
  int dim_;
  std::vector<Point> nodes_;
  Eigen::MatrixXd coeff_; // basis i = sum_j coeff_(i, j) * monomial_j
};

/// Raviart-Thomas element of order k1 >= 1 (lowest order k1 = 1).
///
/// Degrees of freedom, in this order:
///  - edge i, j = 0..k1-1: int_{e_i} v.n L_j(s) ds, with s the counter-clockwise
///    arclength parameter on [0,1] and L_j the shifted Legendre polynomial;
///  - interior: int_T v.(m,0) then int_T v.(0,m) for monomials m of degree <= k1-2.
/// The basis is dual to these functionals.
class RTElement {
public:
  explicit RTElement(int k1);

  int order() const { return k1_; }
  int dim() const { return dim_; }

  void eval(Point xi, Point* values, double* divs) const;

  /// Local degrees of freedom of a reference vector field, given its values
  /// at the points of edge_points() and interior_points().
  const std::vector<std::vector<Point>>& edge_points() const { return edge_pts_; }
  const std::vector<Point>& interior_points() const { return int_rule_pts_; }
  /// edge_values[i][q] is the field at edge_points()[i][q].
  Eigen::VectorXd dofs(const std::vector<std::vector<Point>>& edge_values,
                       const std::vector<Point>& interior_values) const;

  /// Sign applied to local edge DoF j when the cell's counter-clockwise
  /// direction disagrees with the global edge orientation.
  static double flip_factor(int j) { return (j % 2 == 0) ? -1.0 : 1.0; }

private:
  void eval_span(Point xi, Point* values, double* divs) const;

  int k1_;
  int dim_;
  Eigen::MatrixXd coeff_; // basis i = sum_j coeff_(i, j) * span_j
  std::vector<std::vector<Point>> edge_pts_;
  std::vector<double> edge_w_;
  std::vector<std::vector<double>> edge_leg_; // [q][j]
  std::vector<Point> int_rule_pts_;
  std::vector<double> int_rule_w_;
};

const DGElement& dg_element(int k);
const RTElement& rt_element(int k1);

/// Tabulated values: rows are basis functions, columns are points.
Eigen::MatrixXd eval_dg_basis(int k, const std::vector<Point>& points);

struct RTValues {
  Eigen::MatrixXd vx, vy, div;
};
RTValues eval_rt_basis(int k1, const std::vector<Point>& points);

/// Affine map from the reference triangle onto a mesh cell.
struct CellMap {
  Point x0;
  Eigen::Matrix2d J;
  double detJ = 0.0;

  static CellMap of(const Mesh2D& mesh, int cell);
  Point operator()(Point xi) const {
    return {x0.x + J(0, 0) * xi.x + J(0, 1) * xi.y, x0.y + J(1, 0) * xi.x + J(1, 1) * xi.y};
  }
  /// Contravariant Piola push-forward of a reference vector.
  Point piola(Point v) const {
    return {(J(0, 0) * v.x + J(0, 1) * v.y) / detJ, (J(1, 0) * v.x + J(1, 1) * v.y) / detJ};
  }
  double piola_div(double d) const { return d / detJ; }
  /// Inverse Piola: the reference field whose push-forward is v.
  Point piola_pullback(Point v) const {
    // detJ * J^{-1} v
    return {J(1, 1) * v.x - J(0, 1) * v.y, -J(1, 0) * v.x + J(0, 0) * v.y};
  }
};

} // namespace h2mixed
