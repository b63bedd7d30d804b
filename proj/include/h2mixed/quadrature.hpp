#pragma once

#include "h2mixed/mesh.hpp"

#include <vector>

namespace h2mixed {

/// Quadrature on the reference triangle (0,0), (1,0), (0,1).
/// Points are reference coordinates; barycentric coordinates are (1-x-y, x, y).
struct QuadRule {
  std::vector<Point> points;
  std::vector<double> weights; ///< sum to 1/2
  int exact_degree = 0;
};

constexpr int kMaxQuadDegree = 20;

/// Positive rule exact for polynomials of total degree <= `degree`.
/// Rules are built once and shared; the reference stays valid for the program lifetime.
const QuadRule& quad_rule(int degree);

/// Gauss-Legendre rule with `npoints` points on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre01(int npoints);

} // namespace h2mixed
