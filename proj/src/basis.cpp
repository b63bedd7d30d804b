#include "h2mixed/basis.hpp"

#include "h2mixed/exceptions.hpp"
#include "h2mixed/quadrature.hpp"

#include <cmath>
#include <utility>

namespace h2mixed {

namespace {

using Mono = std::pair<int, int>; // x^a y^b

std::vector<Mono> monomials(int p) {
  std::vector<Mono> ms;
  for (int d = 0; d <= p; ++d)
    for (int b = 0; b <= d; ++b) ms.push_back({d - b, b});
  return ms;
}

std::vector<Mono> homogeneous(int p) {
  std::vector<Mono> ms;
  for (int b = 0; b <= p; ++b) ms.push_back({p - b, b});
  return ms;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double mono(Mono m, Point p) { return ipow(p.x, m.first) * ipow(p.y, m.second); }
double mono_dx(Mono m, Point p) { return m.first == 0 ? 0.0 : m.first * ipow(p.x, m.first - 1) * ipow(p.y, m.second); }
double mono_dy(Mono m, Point p) { return m.second == 0 ? 0.0 : m.second * ipow(p.x, m.first) * ipow(p.y, m.second - 1); }

const Point kRefVerts[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

std::vector<Point> lattice_nodes(int k) {
  if (k == 0) return {{1.0 / 3.0, 1.0 / 3.0}};
  std::vector<Point> nodes(kRefVerts, kRefVerts + 3);
  for (int e = 0; e < 3; ++e) {
    const Point a = kRefVerts[(e + 1) % 3], b = kRefVerts[(e + 2) % 3];
    for (int i = 1; i < k; ++i) nodes.push_back(a + (double(i) / k) * (b - a));
  }
  for (int j = 1; j < k; ++j)
    for (int i = 1; i + j < k; ++i) nodes.push_back({double(i) / k, double(j) / k});
  return nodes;
}

constexpr int kEdgeQuadPoints = 10;
constexpr int kInteriorQuadDegree = 14;

} // namespace

DGElement::DGElement(int k) : k_(k), dim_(dg_dim(k)) {
  if (k < 0 || k > kMaxDGOrder) throw Error("unsupported DG order " + std::to_string(k));
  nodes_ = lattice_nodes(k);
  const auto ms = monomials(k);
  Eigen::MatrixXd V(dim_, dim_);
  for (int l = 0; l < dim_; ++l)
    for (int j = 0; j < dim_; ++j) V(l, j) = mono(ms[j], nodes_[l]);
  coeff_ = V.transpose().inverse();
}

void DGElement::eval(Point xi, double* values) const {
  const auto ms = monomials(k_);
  Eigen::VectorXd m(dim_);
  for (int j = 0; j < dim_; ++j) m(j) = mono(ms[j], xi);
  Eigen::Map<Eigen::VectorXd>(values, dim_) = coeff_ * m;
}

void DGElement::eval_grad(Point xi, Point* grads) const {
  const auto ms = monomials(k_);
  Eigen::VectorXd mx(dim_), my(dim_);
  for (int j = 0; j < dim_; ++j) {
    mx(j) = mono_dx(ms[j], xi);
    my(j) = mono_dy(ms[j], xi);
  }
  const Eigen::VectorXd gx = coeff_ * mx, gy = coeff_ * my;
  for (int i = 0; i < dim_; ++i) grads[i] = {gx(i), gy(i)};
}

RTElement::RTElement(int k1) : k1_(k1), dim_(rt_dim(k1)) {
  if (k1 < 1 || k1 > kMaxDGOrder + 1) throw Error("unsupported RT order " + std::to_string(k1));

  const LineRule g = gauss_legendre01(kEdgeQuadPoints);
  edge_w_ = g.weights;
  edge_pts_.resize(3);
  for (int e = 0; e < 3; ++e) {
    const Point a = kRefVerts[(e + 1) % 3], b = kRefVerts[(e + 2) % 3];
    for (double s : g.points) edge_pts_[e].push_back(a + s * (b - a));
  }
  edge_leg_.resize(g.points.size());
  for (std::size_t q = 0; q < g.points.size(); ++q)
    for (int j = 0; j < k1; ++j) edge_leg_[q].push_back(std::legendre(j, 2.0 * g.points[q] - 1.0));
  const QuadRule& qr = quad_rule(kInteriorQuadDegree);
  int_rule_pts_ = qr.points;
  int_rule_w_ = qr.weights;

  // Duality matrix D(l, j) = dof_l(span_j).
  Eigen::MatrixXd D(dim_, dim_);
  std::vector<Point> vals(dim_);
  std::vector<double> divs(dim_);
  std::vector<std::vector<std::vector<Point>>> ev(dim_, std::vector<std::vector<Point>>(3));
  std::vector<std::vector<Point>> iv(dim_);
  for (int e = 0; e < 3; ++e)
    for (const Point& p : edge_pts_[e]) {
      eval_span(p, vals.data(), divs.data());
      for (int j = 0; j < dim_; ++j) ev[j][e].push_back(vals[j]);
    }
  for (const Point& p : int_rule_pts_) {
    eval_span(p, vals.data(), divs.data());
    for (int j = 0; j < dim_; ++j) iv[j].push_back(vals[j]);
  }
  for (int j = 0; j < dim_; ++j) D.col(j) = dofs(ev[j], iv[j]);
  coeff_ = D.transpose().inverse();
}

void RTElement::eval_span(Point xi, Point* values, double* divs) const {
  int idx = 0;
  const auto ms = monomials(k1_ - 1);
  for (const Mono& m : ms) {
    values[idx] = {mono(m, xi), 0.0};
    divs[idx++] = mono_dx(m, xi);
  }
  for (const Mono& m : ms) {
    values[idx] = {0.0, mono(m, xi)};
    divs[idx++] = mono_dy(m, xi);
  }
  for (const Mono& m : homogeneous(k1_ - 1)) {
    const double v = mono(m, xi);
    values[idx] = {xi.x * v, xi.y * v};
    divs[idx++] = (k1_ + 1) * v;
  }
}

void RTElement::eval(Point xi, Point* values, double* divs) const {
  std::vector<Point> sv(dim_);
  std::vector<double> sd(dim_);
  eval_span(xi, sv.data(), sd.data());
  for (int i = 0; i < dim_; ++i) {
    Point v{};
    double d = 0.0;
    for (int j = 0; j < dim_; ++j) {
      const double c = coeff_(i, j);
      v.x += c * sv[j].x;
      v.y += c * sv[j].y;
      d += c * sd[j];
    }
    values[i] = v;
    divs[i] = d;
  }
}

Eigen::VectorXd RTElement::dofs(const std::vector<std::vector<Point>>& edge_values,
                                const std::vector<Point>& interior_values) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int e = 0; e < 3; ++e) {
    const Point t = kRefVerts[(e + 2) % 3] - kRefVerts[(e + 1) % 3];
    const Point nrm{t.y, -t.x};
    for (std::size_t q = 0; q < edge_w_.size(); ++q) {
      const double vn = dot(edge_values[e][q], nrm) * edge_w_[q];
      for (int j = 0; j < k1_; ++j) out(e * k1_ + j) += vn * edge_leg_[q][j];
    }
  }
  const auto ms = monomials(k1_ - 2);
  const int base = 3 * k1_, nm = int(ms.size());
  for (std::size_t q = 0; q < int_rule_w_.size(); ++q) {
    const Point v = interior_values[q];
    const double w = int_rule_w_[q];
    for (int j = 0; j < nm; ++j) {
      const double m = mono(ms[j], int_rule_pts_[q]);
      out(base + j) += w * v.x * m;
      out(base + nm + j) += w * v.y * m;
    }
  }
  return out;
}

const DGElement& dg_element(int k) {
  static const std::vector<DGElement> els = [] {
    std::vector<DGElement> v;
    for (int k = 0; k <= kMaxDGOrder; ++k) v.emplace_back(k);
    return v;
  }();
  if (k < 0 || k > kMaxDGOrder) throw Error("unsupported DG order " + std::to_string(k));
  return els[k];
}

const RTElement& rt_element(int k1) {
  static const std::vector<RTElement> els = [] {
    std::vector<RTElement> v;
    for (int k1 = 1; k1 <= kMaxDGOrder + 1; ++k1) v.emplace_back(k1);
    return v;
  }();
  if (k1 < 1 || k1 > kMaxDGOrder + 1) throw Error("unsupported RT order " + std::to_string(k1));
  return els[k1 - 1];
}

Eigen::MatrixXd eval_dg_basis(int k, const std::vector<Point>& points) {
  const DGElement& el = dg_element(k);
  Eigen::MatrixXd out(el.dim(), points.size());
  std::vector<double> v(el.dim());
  for (std::size_t q = 0; q < points.size(); ++q) {
    el.eval(points[q], v.data());
    for (int i = 0; i < el.dim(); ++i) out(i, q) = v[i];
  }
  return out;
}

RTValues eval_rt_basis(int k1, const std::vector<Point>& points) {
  const RTElement& el = rt_element(k1);
  const int n = el.dim(), m = int(points.size());
  RTValues out{Eigen::MatrixXd(n, m), Eigen::MatrixXd(n, m), Eigen::MatrixXd(n, m)};
  std::vector<Point> v(n);
  std::vector<double> d(n);
  for (int q = 0; q < m; ++q) {
    el.eval(points[q], v.data(), d.data());
    for (int i = 0; i < n; ++i) {
      out.vx(i, q) = v[i].x;
      out.vy(i, q) = v[i].y;
      out.div(i, q) = d[i];
    }
  }
  return out;
}

CellMap CellMap::of(const Mesh2D& mesh, int cell) {
  const auto& c = mesh.cells[cell];
  const Point a = mesh.vertices[c[0]], b = mesh.vertices[c[1]], d = mesh.vertices[c[2]];
  CellMap m;
  m.x0 = a;
  m.J << b.x - a.x, d.x - a.x, b.y - a.y, d.y - a.y;
  m.detJ = m.J.determinant();
  if (m.detJ <= 0.0) throw Error("cell " + std::to_string(cell) + " has nonpositive Jacobian");
  return m;
}

} // namespace h2mixed
