#pragma once

#include "h2mixed/assembly.hpp"
#include "h2mixed/direct.hpp"
#include "h2mixed/krylov.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

namespace h2mixed {

/// Additive Schwarz over star patches: z = sum_i R_i^T A_ii^{-1} R_i r.
/// Constrained DoFs act as 1x1 identity patches. Patch matrices that are
/// bitwise identical share one LU factorization.
class VankaSmoother {
public:
  VankaSmoother(const SpMat& K, std::vector<StarPatch> patches, const std::vector<char>& constrained);

  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z, ExecPolicy policy = ExecPolicy::OpenMP) const;

  const std::vector<StarPatch>& patches() const { return patches_; }
  int num_factorizations() const { return int(factors_.size()); }
  /// Dense R_i K R_i^T for patch i.
  static Eigen::MatrixXd gather(const SpMat& K, const std::vector<int>& dofs);

private:
  // LU of D M D with D = diag(1/sqrt(max_j |M_ij|)); blocks of a patch live on very different scales
  struct PatchFactor {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::VectorXd d;
    Eigen::VectorXd solve(const Eigen::VectorXd& r) const { return d.cwiseProduct(lu.solve(d.cwiseProduct(r))); }
  };

  std::vector<StarPatch> patches_;
  std::vector<int> factor_of_;
  std::vector<PatchFactor> factors_;
  std::vector<int> identity_dofs_;
  std::vector<std::size_t> buf_offset_;
  std::size_t buf_size_ = 0;
  // per DoF, the buffer slots holding its patch corrections in patch order
  std::vector<int> gather_ptr_;
  std::vector<std::size_t> gather_slot_;
};

struct MGOptions {
  /// Auxiliary operator on every level: A11 = weight * DG mass.
  std::optional<double> aux_weight;
  /// Use weight = 1/h of each level (overrides aux_weight).
  bool aux_weight_inv_h = false;
  int coarsest_n = 4;
  int relax_steps = 2;
  ExecPolicy policy = ExecPolicy::OpenMP;
};

struct MGLevel {
  std::shared_ptr<const Mesh2D> mesh;
  BlockSystem sys;
  std::unique_ptr<VankaSmoother> vanka; ///< empty on the coarsest level
  SpMat P;                              ///< prolongation from the next coarser level
};

/// Block-diagonal prolongation between nested spaces: each coarse basis
/// function interpolated on the fine mesh, field by field.
SpMat build_prolongation(const BlockSystem& coarse, const BlockSystem& fine);

/// Coarsest mesh of the hierarchy for a domain, labeled.
std::shared_ptr<const Mesh2D> coarse_mesh(Domain d, int n, const GammaPartition& part);

class MGHierarchy {
public:
  /// Levels n = coarsest_n, 2 coarsest_n, ..., finest_n, rediscretized on each.
  static MGHierarchy build(const ProblemSpec& spec, int finest_n, const MGOptions& opt = {});

  int num_levels() const { return int(levels_.size()); }
  const MGLevel& level(int l) const { return levels_[l]; }
  const MGLevel& finest() const { return levels_.back(); }

  /// One V-cycle on level l for K_l x = b, starting from x.
  void v_cycle(int l, Eigen::VectorXd& x, const Eigen::VectorXd& b) const;
  /// relax_steps steps of FGMRES on level l preconditioned by the smoother.
  void relax(int l, Eigen::VectorXd& x, const Eigen::VectorXd& b) const;
  /// Preconditioner: z = one V-cycle from zero on the finest level.
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

  const MGOptions& options() const { return opt_; }

private:
  std::vector<MGLevel> levels_;
  DenseDirect coarse_;
  MGOptions opt_;
};

struct MGSolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// FGMRES on `sys` preconditioned by the hierarchy. The initial guess carries
/// the constrained values, so every Krylov vector stays in the free subspace.
MGSolveResult solve_mg(const BlockSystem& sys, const MGHierarchy& mg, const FGMRESOptions& opt = {});

} // namespace h2mixed
