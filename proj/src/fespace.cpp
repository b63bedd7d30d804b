#include "h2mixed/fespace.hpp"

#include "h2mixed/exceptions.hpp"
#include "h2mixed/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace h2mixed {

int FESpace::num_constrained() const { return int(std::count(constrained.begin(), constrained.end(), 1)); }

FESpace make_dg_space(std::shared_ptr<const Mesh2D> mesh, int k) {
  FESpace V;
  V.family = Family::DG;
  V.order = k;
  V.ldofs = dg_element(k).dim();
  const int nc = mesh->num_cells();
  V.ndof = nc * V.ldofs;
  V.cell_dof_map.resize(std::size_t(V.ndof));
  for (int i = 0; i < V.ndof; ++i) V.cell_dof_map[i] = i;
  V.cell_sign.assign(std::size_t(V.ndof), 1.0);
  V.constrained.assign(std::size_t(V.ndof), 0);
  V.constrained_value.assign(std::size_t(V.ndof), 0.0);
  V.mesh = std::move(mesh);
  return V;
}

FESpace make_rt_space(std::shared_ptr<const Mesh2D> mesh, int k1) {
  const RTElement& el = rt_element(k1);
  FESpace V;
  V.family = Family::RT;
  V.order = k1;
  V.ldofs = el.dim();
  const int nc = mesh->num_cells(), ne = mesh->num_edges();
  const int ni = rt_interior_dofs(k1);
  V.ndof = ne * k1 + nc * ni;
  V.cell_dof_map.resize(std::size_t(nc) * V.ldofs);
  V.cell_sign.resize(std::size_t(nc) * V.ldofs);
  for (int c = 0; c < nc; ++c) {
    int* d = V.cell_dof_map.data() + std::size_t(c) * V.ldofs;
    double* s = V.cell_sign.data() + std::size_t(c) * V.ldofs;
    for (int i = 0; i < 3; ++i) {
      const CellEdge ce = mesh->cell_edges[c][i];
      for (int j = 0; j < k1; ++j) {
        d[i * k1 + j] = ce.edge * k1 + j;
        s[i * k1 + j] = ce.sign > 0 ? 1.0 : RTElement::flip_factor(j);
      }
    }
    for (int m = 0; m < ni; ++m) {
      d[3 * k1 + m] = ne * k1 + c * ni + m;
      s[3 * k1 + m] = 1.0;
    }
  }
  V.constrained.assign(std::size_t(V.ndof), 0);
  V.constrained_value.assign(std::size_t(V.ndof), 0.0);
  V.mesh = std::move(mesh);
  return V;
}

Eigen::VectorXd edge_moments(const Mesh2D& mesh, int e, int k1, const VectorFn& F) {
  static const LineRule g = gauss_legendre01(12);
  const Point a = mesh.vertices[mesh.edges[e][0]], b = mesh.vertices[mesh.edges[e][1]];
  const Point t = b - a;
  const Point nrm{t.y, -t.x};
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k1);
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    const double s = g.points[q];
    const double vn = dot(F(a + s * t), nrm) * g.weights[q];
    for (int j = 0; j < k1; ++j) out(j) += vn * std::legendre(j, 2.0 * s - 1.0);
  }
  return out;
}

void constrain_normal_trace(FESpace& V, GammaSet classes, const VectorFn& data) {
  if (V.family != Family::RT) throw Error("normal-trace constraints apply to RT spaces only");
  const Mesh2D& m = *V.mesh;
  const int k1 = V.order;
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto g = m.edge_gamma(e);
    if (!g || !classes.contains(*g)) continue;
    Eigen::VectorXd val = data ? edge_moments(m, e, k1, data) : Eigen::VectorXd::Zero(k1);
    for (int j = 0; j < k1; ++j) {
      if (!std::isfinite(val(j)))
        throw Error("boundary data is not finite on constrained edge " + std::to_string(e));
      V.constrained[e * k1 + j] = 1;
      V.constrained_value[e * k1 + j] = val(j);
    }
  }
}

Point to_reference(const CellMap& map, Point x) {
  const Point d = x - map.x0;
  const Eigen::Matrix2d& J = map.J;
  return {(J(1, 1) * d.x - J(0, 1) * d.y) / map.detJ, (-J(1, 0) * d.x + J(0, 0) * d.y) / map.detJ};
}

namespace {

// Reference DG mass matrix inverse, per order.
const Eigen::MatrixXd& dg_ref_mass_inv(int k) {
  static const std::vector<Eigen::MatrixXd> inv = [] {
    std::vector<Eigen::MatrixXd> r;
    for (int kk = 0; kk <= kMaxDGOrder; ++kk) {
      const DGElement& el = dg_element(kk);
      const QuadRule& q = quad_rule(2 * kk);
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(el.dim(), el.dim());
      std::vector<double> v(el.dim());
      for (std::size_t p = 0; p < q.points.size(); ++p) {
        el.eval(q.points[p], v.data());
        for (int i = 0; i < el.dim(); ++i)
          for (int j = 0; j < el.dim(); ++j) M(i, j) += q.weights[p] * v[i] * v[j];
      }
      r.push_back(M.inverse());
    }
    return r;
  }();
  return inv[k];
}

} // namespace

Eigen::VectorXd local_interp_dg(const FESpace& V, int cell, const ScalarFn& f, int quad_degree) {
  const DGElement& el = dg_element(V.order);
  const CellMap map = CellMap::of(*V.mesh, cell);
  const QuadRule& q = quad_rule(quad_degree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(el.dim());
  std::vector<double> v(el.dim());
  for (std::size_t p = 0; p < q.points.size(); ++p) {
    el.eval(q.points[p], v.data());
    const double fv = f(map(q.points[p])) * q.weights[p];
    for (int i = 0; i < el.dim(); ++i) rhs(i) += fv * v[i];
  }
  // detJ cancels between the physical mass matrix and load vector
  return dg_ref_mass_inv(V.order) * rhs;
}

Eigen::VectorXd local_interp_rt(const FESpace& V, int cell, const VectorFn& F) {
  const RTElement& el = rt_element(V.order);
  const CellMap map = CellMap::of(*V.mesh, cell);
  std::vector<std::vector<Point>> ev(3);
  for (int e = 0; e < 3; ++e)
    for (const Point& p : el.edge_points()[e]) ev[e].push_back(map.piola_pullback(F(map(p))));
  std::vector<Point> iv;
  iv.reserve(el.interior_points().size());
  for (const Point& p : el.interior_points()) iv.push_back(map.piola_pullback(F(map(p))));
  Eigen::VectorXd d = el.dofs(ev, iv);
  const auto s = V.signs(cell);
  for (int i = 0; i < el.dim(); ++i) d(i) *= s[i];
  return d;
}

Eigen::VectorXd interp_dg(const FESpace& V, const CellScalarFn& f, int quad_degree) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(V.ndof);
  for (int c = 0; c < V.mesh->num_cells(); ++c) {
    const Eigen::VectorXd loc = local_interp_dg(V, c, [&](Point p) { return f(c, p); }, quad_degree);
    const auto d = V.dofs(c);
    for (int i = 0; i < V.ldofs; ++i) x(d[i]) = loc(i);
  }
  return x;
}

Eigen::VectorXd interp_dg(const FESpace& V, const ScalarFn& f, int quad_degree) {
  return interp_dg(V, CellScalarFn([&](int, Point p) { return f(p); }), quad_degree);
}

Eigen::VectorXd interp_rt(const FESpace& V, const CellVectorFn& F) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(V.ndof);
  for (int c = 0; c < V.mesh->num_cells(); ++c) {
    const Eigen::VectorXd loc = local_interp_rt(V, c, [&](Point p) { return F(c, p); });
    const auto d = V.dofs(c);
    for (int i = 0; i < V.ldofs; ++i) x(d[i]) = loc(i);
  }
  return x;
}

Eigen::VectorXd interp_rt(const FESpace& V, const VectorFn& F) {
  return interp_rt(V, CellVectorFn([&](int, Point p) { return F(p); }));
}

double eval_dg(const FESpace& V, const Eigen::VectorXd& x, int cell, Point xi) {
  const DGElement& el = dg_element(V.order);
  std::vector<double> v(el.dim());
  el.eval(xi, v.data());
  const auto d = V.dofs(cell);
  double r = 0.0;
  for (int i = 0; i < el.dim(); ++i) r += x(d[i]) * v[i];
  return r;
}

void eval_rt(const FESpace& V, const Eigen::VectorXd& x, int cell, Point xi, Point& value, double& div) {
  const RTElement& el = rt_element(V.order);
  const CellMap map = CellMap::of(*V.mesh, cell);
  std::vector<Point> v(el.dim());
  std::vector<double> dv(el.dim());
  el.eval(xi, v.data(), dv.data());
  const auto d = V.dofs(cell);
  const auto s = V.signs(cell);
  Point ref{};
  double rdiv = 0.0;
  for (int i = 0; i < el.dim(); ++i) {
    const double c = x(d[i]) * s[i];
    ref = ref + c * v[i];
    rdiv += c * dv[i];
  }
  value = map.piola(ref);
  div = map.piola_div(rdiv);
}

} // namespace h2mixed
