#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace h2mixed {

using LinearOp = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

enum class StopReason { Absolute, Relative, MaxIterations, Breakdown };
std::string to_string(StopReason r);

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history; ///< iterations + 1 entries
  bool converged = false;
  StopReason reason = StopReason::MaxIterations;
  double wall_time = 0.0;
};

struct FGMRESOptions {
  double tol_abs = 1e-8;
  double tol_rel = 1e-8;
  int maxit = 100;
};

/// Flexible GMRES with right preconditioning, modified Gram-Schmidt and no
/// restart. x holds the initial guess on entry and the iterate on exit.
/// Tolerances of zero run exactly maxit steps unless the residual vanishes.
/// The residual norms recorded are the Arnoldi least-squares estimates.
SolveReport fgmres(const LinearOp& A, const LinearOp& M, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                   const FGMRESOptions& opt = {});

} // namespace h2mixed
