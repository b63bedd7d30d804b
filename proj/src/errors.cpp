#include "h2mixed/errors.hpp"

#include "h2mixed/quadrature.hpp"

#include <cmath>

namespace h2mixed {

double ErrorReport::R_uv_plain() const {
  return std::sqrt((e_u + e_v + e_divv) / (n_u + n_v + n_divv));
}

double ErrorReport::R_uv_strengthened() const {
  // The exact normal trace is boundary data, so its (1/h) term has nothing
  // to measure against and stays out of the reference norm.
  return std::sqrt((e_u + e_v + e_divv + e_gdiv + e_gn) / (n_u + n_v + n_divv + n_gdiv));
}

double ErrorReport::R_alpha() const { return std::sqrt((e_a + e_diva) / (n_a + n_diva)); }

double observed_rate(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

namespace {

constexpr int kErrorQuadDegree = 14;
constexpr int kErrorEdgePoints = 12;

struct Local {
  Eigen::VectorXd u, v, a; // global-sign-adjusted local coefficients
};

Local local_coeffs(const BlockSystem& s, const Eigen::VectorXd& x, int c) {
  Local L;
  const auto du = s.U.dofs(c), dv = s.V.dofs(c);
  const auto sv = s.V.signs(c);
  L.u.resize(s.U.ldofs);
  for (int i = 0; i < s.U.ldofs; ++i) L.u(i) = x(du[i]);
  L.v.resize(s.V.ldofs);
  L.a.resize(s.V.ldofs);
  for (int i = 0; i < s.V.ldofs; ++i) {
    L.v(i) = sv[i] * x(s.layout.offset_v() + dv[i]);
    L.a(i) = sv[i] * x(s.layout.offset_a() + dv[i]);
  }
  return L;
}

double sq(double v) { return v * v; }
double sq(Point p) { return p.x * p.x + p.y * p.y; }

} // namespace

ErrorReport compute_errors(const BlockSystem& s, const Eigen::VectorXd& x, const ManufacturedCase& ex) {
  const Mesh2D& m = *s.U.mesh;
  ErrorReport r;
  r.h = m.h();
  const QuadRule& qr = quad_rule(kErrorQuadDegree);
  const Eigen::MatrixXd phi = eval_dg_basis(s.U.order, qr.points);
  const RTValues psi = eval_rt_basis(s.V.order, qr.points);

  for (int c = 0; c < m.num_cells(); ++c) {
    const CellMap map = CellMap::of(m, c);
    const Local L = local_coeffs(s, x, c);
    const Eigen::VectorXd uh = phi.transpose() * L.u;
    const Eigen::VectorXd vx = psi.vx.transpose() * L.v, vy = psi.vy.transpose() * L.v;
    const Eigen::VectorXd vd = psi.div.transpose() * L.v;
    const Eigen::VectorXd ax = psi.vx.transpose() * L.a, ay = psi.vy.transpose() * L.a;
    const Eigen::VectorXd ad = psi.div.transpose() * L.a;
    for (std::size_t q = 0; q < qr.weights.size(); ++q) {
      const double w = qr.weights[q] * map.detJ;
      const Point p = map(qr.points[q]);
      const double u = ex.u(p), lap = ex.lap_u(p), diva = ex.div_alpha(p);
      const Point v = ex.v(p), a = ex.alpha(p);
      const Point vh = map.piola({vx(q), vy(q)}), ah = map.piola({ax(q), ay(q)});
      r.e_u += w * sq(u - uh(q));
      r.e_v += w * sq(v - vh);
      r.e_divv += w * sq(lap - map.piola_div(vd(q)));
      r.e_a += w * sq(a - ah);
      r.e_diva += w * sq(diva - map.piola_div(ad(q)));
      r.n_u += w * sq(u);
      r.n_v += w * sq(v);
      r.n_divv += w * sq(lap);
      r.n_a += w * sq(a);
      r.n_diva += w * sq(diva);
    }
  }

  if (!m.has_gamma({Gamma::G1})) return r;
  r.strengthened = true;
  const LineRule g = gauss_legendre01(kErrorEdgePoints);
  const double h = m.h();
  const Eigen::VectorXd xv = x.segment(s.layout.offset_v(), s.layout.nv);
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto cls = m.edge_gamma(e);
    if (!cls || *cls != Gamma::G1) continue;
    const int c = m.edge_cells[e][0];
    const CellMap map = CellMap::of(m, c);
    const Point a = m.vertices[m.edges[e][0]], b = m.vertices[m.edges[e][1]];
    const double len = m.edge_length(e);
    const Point nrm = m.edge_normal(e); // sign irrelevant for squared terms
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const Point p = a + g.points[q] * (b - a);
      Point vh;
      double dh;
      eval_rt(s.V, xv, c, to_reference(map, p), vh, dh);
      const double ds = g.weights[q] * len;
      const double lap = ex.lap_u(p);
      const double vn = dot(ex.v(p), nrm);
      r.e_gdiv += ds * h * sq(lap - dh);
      r.e_gn += ds * sq(vn - dot(vh, nrm)) / h;
      r.n_gdiv += ds * h * sq(lap);
    }
  }
  return r;
}

} // namespace h2mixed
