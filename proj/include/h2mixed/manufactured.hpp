#pragma once

#include "h2mixed/fespace.hpp"

#include <string>

namespace h2mixed {

/// Closed-form solution u with the derivatives the mixed system needs.
/// v = grad u, alpha = grad(lap u) - c0 grad u, f = bilap u - c0 lap u + c1 u.
struct ManufacturedCase {
  std::string name;
  double c0 = 0.0, c1 = 0.0;
  ScalarFn u, lap_u, bilap_u;
  VectorFn grad_u, grad_lap_u;

  Point v(Point x) const { return grad_u(x); }
  Point alpha(Point x) const { return grad_lap_u(x) - c0 * grad_u(x); }
  double f(Point x) const { return bilap_u(x) - c0 * lap_u(x) + c1 * u(x); }
  /// div alpha, computed from the closed forms
  double div_alpha(Point x) const { return bilap_u(x) - c0 * lap_u(x); }
};

/// name is "u1ex" (sin(2 pi x) cos(3 pi y)) or "u2ex" (a limited-regularity variant).
ManufacturedCase make_case(const std::string& name, double c0, double c1);

} // namespace h2mixed
