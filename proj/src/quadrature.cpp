#include "h2mixed/quadrature.hpp"

#include "h2mixed/exceptions.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace h2mixed {

LineRule gauss_legendre01(int npoints) {
  if (npoints < 1) throw Error("Gauss-Legendre rule needs at least one point");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int i = 1; i < npoints; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  LineRule r;
  for (int i = 0; i < npoints; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    r.points.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
    r.weights.push_back(v0 * v0); // 2 v0^2 on [-1,1], halved for [0,1]
  }
  return r;
}

namespace {

QuadRule make_rule(int degree) {
  QuadRule q;
  q.exact_degree = degree;
  if (degree <= 1) {
    q.points = {{1.0 / 3.0, 1.0 / 3.0}};
    q.weights = {0.5};
    return q;
  }
  if (degree == 2) {
    q.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    q.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return q;
  }
  // Collapsed tensor rule: x = s(1-t), y = t, dx dy = (1-t) ds dt.
  // The Jacobian raises the t-degree by one.
  const int m = (degree + 3) / 2;
  const LineRule g = gauss_legendre01(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double s = g.points[i], t = g.points[j];
      q.points.push_back({s * (1.0 - t), t});
      q.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - t));
    }
  return q;
}

} // namespace

const QuadRule& quad_rule(int degree) {
  if (degree < 0 || degree > kMaxQuadDegree)
    throw Error("no quadrature rule of degree " + std::to_string(degree));
  static const std::vector<QuadRule> rules = [] {
    std::vector<QuadRule> r;
    for (int d = 0; d <= kMaxQuadDegree; ++d) r.push_back(make_rule(d));
    return r;
  }();
  return rules[degree];
}

} // namespace h2mixed
