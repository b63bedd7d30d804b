#pragma once

#include "h2mixed/assembly.hpp"
#include "h2mixed/manufactured.hpp"

#include <Eigen/Dense>

namespace h2mixed {

/// Relative errors of a discrete solution against the exact fields.
/// Squared norms of the error and of the exact field are kept separately.
struct ErrorReport {
  double h = 0.0;
  double e_u = 0, e_v = 0, e_divv = 0, e_a = 0, e_diva = 0;  ///< squared L2 errors
  double n_u = 0, n_v = 0, n_divv = 0, n_a = 0, n_diva = 0;  ///< squared L2 norms of the exact fields
  double e_gdiv = 0, e_gn = 0;     ///< h||div e_v||^2 and (1/h)||e_v.n||^2 on gamma1 edges
  double n_gdiv = 0;               ///< h||div v||^2 on gamma1 edges
  bool strengthened = false;       ///< gamma1 present, R_uv includes the boundary terms

  double R_uv_plain() const;
  double R_uv_strengthened() const;
  /// The reported (u,v) error: strengthened when gamma1 is present.
  double R_uv() const { return strengthened ? R_uv_strengthened() : R_uv_plain(); }
  double R_alpha() const;
};

/// Degree-14 cell quadrature and 12-point edge quadrature of squared errors.
ErrorReport compute_errors(const BlockSystem& sys, const Eigen::VectorXd& x, const ManufacturedCase& ex);

/// log2(e_coarse / e_fine) for consecutive h halving.
double observed_rate(double e_coarse, double e_fine);

} // namespace h2mixed
