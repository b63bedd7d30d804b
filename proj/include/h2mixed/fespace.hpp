#pragma once

#include "h2mixed/basis.hpp"
#include "h2mixed/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace h2mixed {

enum class Family { DG, RT };

/// Field callbacks receive the cell containing x, so that piecewise
/// functions (e.g. a coarse-mesh finite element function) can be sampled.
using CellScalarFn = std::function<double(int cell, Point x)>;
using CellVectorFn = std::function<Point(int cell, Point x)>;
using ScalarFn = std::function<double(Point x)>;
using VectorFn = std::function<Point(Point x)>;

/// Finite element space DG(k) or RT(k1) on a mesh.
///
/// RT numbering: DoF j of edge e is e*k1 + j; interior DoF m of cell c is
/// E*k1 + c*k1*(k1-1) + m.
struct FESpace {
  Family family = Family::DG;
  int order = 0; ///< k for DG, k1 for RT
  std::shared_ptr<const Mesh2D> mesh;
  int ndof = 0;
  int ldofs = 0;                  ///< DoFs per cell
  std::vector<int> cell_dof_map;  ///< num_cells * ldofs
  std::vector<double> cell_sign;  ///< factor turning local basis functions into global ones
  std::vector<char> constrained;  ///< per global DoF
  std::vector<double> constrained_value;

  std::span<const int> dofs(int c) const { return {cell_dof_map.data() + std::size_t(c) * ldofs, std::size_t(ldofs)}; }
  std::span<const double> signs(int c) const { return {cell_sign.data() + std::size_t(c) * ldofs, std::size_t(ldofs)}; }
  int num_constrained() const;
};

FESpace make_dg_space(std::shared_ptr<const Mesh2D> mesh, int k);
FESpace make_rt_space(std::shared_ptr<const Mesh2D> mesh, int k1);

/// Fixes the normal-moment DoFs on every boundary edge whose class is in
/// `classes` to the moments of `data` (zero when data is empty).
void constrain_normal_trace(FESpace& space, GammaSet classes, const VectorFn& data = {});

/// Edge normal moments of F on edge e, in the global orientation.
Eigen::VectorXd edge_moments(const Mesh2D& mesh, int e, int k1, const VectorFn& F);

/// Per-cell L2 projection onto DG(k): global-basis coefficients for one cell.
Eigen::VectorXd local_interp_dg(const FESpace& V, int cell, const ScalarFn& f, int quad_degree = 14);
/// Canonical RT interpolant on one cell (global orientation applied).
Eigen::VectorXd local_interp_rt(const FESpace& V, int cell, const VectorFn& F);

Eigen::VectorXd interp_dg(const FESpace& V, const CellScalarFn& f, int quad_degree = 14);
Eigen::VectorXd interp_dg(const FESpace& V, const ScalarFn& f, int quad_degree = 14);
Eigen::VectorXd interp_rt(const FESpace& V, const CellVectorFn& F);
Eigen::VectorXd interp_rt(const FESpace& V, const VectorFn& F);

/// Pointwise evaluation of finite element functions at a reference point of a cell.
double eval_dg(const FESpace& V, const Eigen::VectorXd& x, int cell, Point xi);
void eval_rt(const FESpace& V, const Eigen::VectorXd& x, int cell, Point xi, Point& value, double& div);

/// Reference coordinates of a physical point with respect to a cell.
Point to_reference(const CellMap& map, Point x);

} // namespace h2mixed
