#pragma once

#include "h2mixed/fespace.hpp"
#include "h2mixed/kernels.hpp"
#include "h2mixed/patches.hpp"
#include "h2mixed/problem.hpp"
#include "h2mixed/sparse.hpp"

#include <Eigen/Dense>

#include <memory>

namespace h2mixed {

/// The saddle-point system
///   [A11  0   B1^T] [u]   [f1]
///   [0    A22 B2^T] [v] = [f2]
///   [B1   B2  0   ] [a]   [g ]
/// The blocks and block right-hand sides are stored before strong
/// constraints are applied; K and rhs are the monolithic system after
/// symmetric elimination (identity rows/columns on constrained DoFs).
struct BlockSystem {
  FESpace U, V, A;
  BlockLayout layout;
  SpMat A11, A22, B1, B2; ///< A22 includes the Nitsche terms when present
  Eigen::VectorXd f1, f2, g;
  SpMat K;
  Eigen::VectorXd rhs;
  std::vector<char> constrained;     ///< monolithic mask
  Eigen::VectorXd constrained_value; ///< monolithic, zero off the mask
  double lambda = 0.0;               ///< Nitsche penalty in use, 0 without gamma1

  int size() const { return layout.size(); }
};

struct AssemblyOptions {
  /// Replace A11 by weight * (DG mass) when set.
  std::optional<double> aux_weight;
  ExecPolicy policy = ExecPolicy::OpenMP;
};

/// Quadrature degree used for cell matrices.
inline int assembly_quad_degree(int k) { return 2 * k + 4; }

/// c1-weighted DG mass, and div-div + c0 RT mass (no Nitsche terms).
std::pair<SpMat, SpMat> assemble_a(const ProblemSpec& spec, const FESpace& U, const FESpace& V,
                                   ExecPolicy policy = ExecPolicy::OpenMP);
/// B1 (alpha x u): int u div(beta); B2 (alpha x v): int beta . v
std::pair<SpMat, SpMat> assemble_b(const FESpace& U, const FESpace& V, const FESpace& A,
                                   ExecPolicy policy = ExecPolicy::OpenMP);
/// DG mass matrix.
SpMat assemble_dg_mass(const FESpace& U, ExecPolicy policy = ExecPolicy::OpenMP);

struct NitscheTerms {
  SpMat A22; ///< to be added to A22
  Eigen::VectorXd f2;
};
/// Symmetric Nitsche terms on gamma1 edges with penalty lambda / h, h = 1/n.
NitscheTerms assemble_nitsche(const ProblemSpec& spec, const FESpace& V, double lambda);

struct BlockRhs {
  Eigen::VectorXd f1, f2, g;
};
/// Load vector and natural boundary data (no Nitsche terms).
BlockRhs assemble_rhs(const ProblemSpec& spec, const FESpace& U, const FESpace& V, const FESpace& A);

/// Fixes v.n on gamma3 and alpha.n on gamma2 and gamma3 to the moments of the exact data.
void apply_strong_bc(const ProblemSpec& spec, FESpace& V, FESpace& A);

/// Assembles blocks, rhs, Nitsche terms and strong constraints on a labeled mesh.
BlockSystem assemble_system(const ProblemSpec& spec, std::shared_ptr<const Mesh2D> mesh,
                            const AssemblyOptions& opt = {});

/// Same system with A11 replaced by weight * DG mass.
BlockSystem assemble_auxiliary(const ProblemSpec& spec, std::shared_ptr<const Mesh2D> mesh, double weight,
                               ExecPolicy policy = ExecPolicy::OpenMP);

/// Monolithic matrix from blocks, no constraint elimination.
SpMat monolithic(const BlockSystem& sys);

} // namespace h2mixed
