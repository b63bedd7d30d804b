#pragma once

#include "h2mixed/manufactured.hpp"
#include "h2mixed/mesh.hpp"

#include <optional>

namespace h2mixed {

/// Delta^2 u - c0 Delta u + c1 u = f with boundary classes per segment.
struct ProblemSpec {
  Domain domain = Domain::UnitSquare;
  GammaPartition gamma;
  double c0 = 0.0;
  double c1 = 0.0;
  int k = 0;
  std::optional<double> lambda; ///< Nitsche penalty; defaulted from the trace constant when unset
  /// Exact solution supplying f and all boundary data. When empty, `f` is
  /// used with homogeneous boundary data.
  std::optional<ManufacturedCase> exact;
  ScalarFn f;

  double source(Point x) const;
  bool has(Gamma g) const;
};

/// Throws InadmissibleProblem naming the violated condition.
void check_admissible(const ProblemSpec& spec);

/// h * max over cells with a boundary edge of (k+1)(k+2)|dT| / (2|T|).
double trace_constant(int k, const Mesh2D& mesh);
/// The same maximum without the factor h.
double trace_constant_unscaled(int k, const Mesh2D& mesh);

/// 3 * trace_constant + 2
double default_lambda(int k, const Mesh2D& mesh);

} // namespace h2mixed
