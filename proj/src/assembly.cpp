#include "h2mixed/assembly.hpp"

#include "h2mixed/exceptions.hpp"
#include "h2mixed/quadrature.hpp"

#include <cmath>

namespace h2mixed {

namespace {

struct RefTables {
  const QuadRule* rule = nullptr;
  Eigen::MatrixXd phi;           // DG values, basis x point
  RTValues psi;                  // RT values, basis x point
};

RefTables tabulate(int k, int degree) {
  RefTables t;
  t.rule = &quad_rule(degree);
  t.phi = eval_dg_basis(k, t.rule->points);
  t.psi = eval_rt_basis(k + 1, t.rule->points);
  return t;
}

// Assembles sum_c S_r^T loc_c S_c over cells, with each cell writing its
// entries at a fixed offset so the result does not depend on the schedule.
template <class Local>
SpMat assemble_cells(ExecPolicy policy, const FESpace& R, const FESpace& C, Local&& local) {
  const int nc = R.mesh->num_cells();
  const int lr = R.ldofs, lc = C.ldofs;
  std::vector<Triplet> trip(std::size_t(nc) * lr * lc);
  kernels::parallel_for(policy, nc, [&](int c) {
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(lr, lc);
    local(c, loc);
    const auto rd = R.dofs(c), cd = C.dofs(c);
    const auto rs = R.signs(c), cs = C.signs(c);
    Triplet* out = trip.data() + std::size_t(c) * lr * lc;
    for (int i = 0; i < lr; ++i)
      for (int j = 0; j < lc; ++j) *out++ = Triplet(rd[i], cd[j], rs[i] * cs[j] * loc(i, j));
  });
  return from_triplets(R.ndof, C.ndof, trip);
}

// Local edge index of edge e in cell c.
int local_edge(const Mesh2D& m, int c, int e) {
  for (int i = 0; i < 3; ++i)
    if (m.cell_edges[c][i].edge == e) return i;
  throw Error("edge " + std::to_string(e) + " is not an edge of cell " + std::to_string(c));
}

const Point kRef[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

// Quadrature on a boundary edge, seen from its cell.
struct EdgeQuad {
  int cell = -1;
  CellMap map;
  std::vector<Point> xi;  // reference points
  std::vector<Point> x;   // physical points
  std::vector<double> w;  // parameter weights on [0,1]
  Point nscaled;          // outward normal times edge length
  double length = 0.0;
};

EdgeQuad edge_quad(const Mesh2D& m, int e, int npts) {
  EdgeQuad q;
  q.cell = m.edge_cells[e][0];
  q.map = CellMap::of(m, q.cell);
  const int i = local_edge(m, q.cell, e);
  const Point a = kRef[(i + 1) % 3], b = kRef[(i + 2) % 3];
  const LineRule g = gauss_legendre01(npts);
  for (std::size_t p = 0; p < g.points.size(); ++p) {
    const Point r = a + g.points[p] * (b - a);
    q.xi.push_back(r);
    q.x.push_back(q.map(r));
    q.w.push_back(g.weights[p]);
  }
  const Point pa = q.map(a), pb = q.map(b);
  const Point t = pb - pa;
  q.nscaled = {t.y, -t.x};
  q.length = std::hypot(t.x, t.y);
  return q;
}

constexpr int kEdgeDataPoints = 12;
constexpr int kSourceQuadDegree = 14;

} // namespace

SpMat assemble_dg_mass(const FESpace& U, ExecPolicy policy) {
  const RefTables t = tabulate(U.order, assembly_quad_degree(U.order));
  return assemble_cells(policy, U, U, [&](int c, Eigen::MatrixXd& loc) {
    const double detJ = CellMap::of(*U.mesh, c).detJ;
    for (std::size_t q = 0; q < t.rule->weights.size(); ++q)
      loc.noalias() += (t.rule->weights[q] * detJ) * t.phi.col(q) * t.phi.col(q).transpose();
  });
}

std::pair<SpMat, SpMat> assemble_a(const ProblemSpec& spec, const FESpace& U, const FESpace& V, ExecPolicy policy) {
  if (U.family != Family::DG || V.family != Family::RT || V.order != U.order + 1)
    throw Error("assemble_a: expected DG(k) and RT(k+1) spaces");
  SpMat A11 = spec.c1 * assemble_dg_mass(U, policy);
  const RefTables t = tabulate(U.order, assembly_quad_degree(U.order));
  const double c0 = spec.c0;
  SpMat A22 = assemble_cells(policy, V, V, [&](int c, Eigen::MatrixXd& loc) {
    const CellMap map = CellMap::of(*V.mesh, c);
    const int n = V.ldofs;
    Eigen::MatrixXd px(n, 1), py(n, 1);
    for (std::size_t q = 0; q < t.rule->weights.size(); ++q) {
      const double w = t.rule->weights[q] / map.detJ;
      const auto d = t.psi.div.col(q);
      loc.noalias() += w * d * d.transpose();
      if (c0 != 0.0) {
        px = map.J(0, 0) * t.psi.vx.col(q) + map.J(0, 1) * t.psi.vy.col(q);
        py = map.J(1, 0) * t.psi.vx.col(q) + map.J(1, 1) * t.psi.vy.col(q);
        loc.noalias() += (c0 * w) * (px * px.transpose() + py * py.transpose());
      }
    }
  });
  return {std::move(A11), std::move(A22)};
}

std::pair<SpMat, SpMat> assemble_b(const FESpace& U, const FESpace& V, const FESpace& A, ExecPolicy policy) {
  if (V.order != U.order + 1 || A.order != V.order) throw Error("assemble_b: inconsistent space orders");
  const RefTables t = tabulate(U.order, assembly_quad_degree(U.order));
  SpMat B1 = assemble_cells(policy, A, U, [&](int, Eigen::MatrixXd& loc) {
    // detJ cancels: div = ref div / detJ, dx = detJ dxi
    for (std::size_t q = 0; q < t.rule->weights.size(); ++q)
      loc.noalias() += t.rule->weights[q] * t.psi.div.col(q) * t.phi.col(q).transpose();
  });
  SpMat B2 = assemble_cells(policy, A, V, [&](int c, Eigen::MatrixXd& loc) {
    const CellMap map = CellMap::of(*V.mesh, c);
    Eigen::VectorXd px, py;
    for (std::size_t q = 0; q < t.rule->weights.size(); ++q) {
      px = map.J(0, 0) * t.psi.vx.col(q) + map.J(0, 1) * t.psi.vy.col(q);
      py = map.J(1, 0) * t.psi.vx.col(q) + map.J(1, 1) * t.psi.vy.col(q);
      loc.noalias() += (t.rule->weights[q] / map.detJ) * (px * px.transpose() + py * py.transpose());
    }
  });
  return {std::move(B1), std::move(B2)};
}

NitscheTerms assemble_nitsche(const ProblemSpec& spec, const FESpace& V, double lambda) {
  const Mesh2D& m = *V.mesh;
  NitscheTerms out;
  out.f2 = Eigen::VectorXd::Zero(V.ndof);
  std::vector<Triplet> trip;
  if (!m.has_gamma({Gamma::G1})) {
    out.A22 = from_triplets(V.ndof, V.ndof, trip);
    return out;
  }
  if (!(lambda > 0.0)) throw InadmissibleProblem("the Nitsche penalty lambda must be positive");
  const double pen = lambda / m.h();
  const RTElement& el = rt_element(V.order);
  const int n = el.dim();
  std::vector<Point> val(n);
  std::vector<double> div(n);
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto g = m.edge_gamma(e);
    if (!g || *g != Gamma::G1) continue;
    const EdgeQuad q = edge_quad(m, e, kEdgeDataPoints);
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd pn(n), dv(n);
    for (std::size_t p = 0; p < q.w.size(); ++p) {
      el.eval(q.xi[p], val.data(), div.data());
      for (int i = 0; i < n; ++i) {
        pn(i) = dot(q.map.piola(val[i]), q.nscaled); // psi.n |e|
        dv(i) = q.map.piola_div(div[i]);
      }
      const double w = q.w[p];
      // -int div(v) psi.n - int div(psi) v.n + pen int v.n psi.n
      loc.noalias() += -w * (pn * dv.transpose() + dv * pn.transpose()) + (pen * w / q.length) * pn * pn.transpose();
      if (spec.exact) {
        const double gn = dot(spec.exact->grad_u(q.x[p]), q.nscaled) / q.length;
        rhs += w * gn * (-q.length * dv + pen * pn);
      }
    }
    const auto d = V.dofs(q.cell);
    const auto s = V.signs(q.cell);
    for (int i = 0; i < n; ++i) {
      out.f2(d[i]) += s[i] * rhs(i);
      for (int j = 0; j < n; ++j) trip.emplace_back(d[i], d[j], s[i] * s[j] * loc(i, j));
    }
  }
  out.A22 = from_triplets(V.ndof, V.ndof, trip);
  return out;
}

BlockRhs assemble_rhs(const ProblemSpec& spec, const FESpace& U, const FESpace& V, const FESpace& A) {
  const Mesh2D& m = *U.mesh;
  BlockRhs r;
  r.f1 = Eigen::VectorXd::Zero(U.ndof);
  r.f2 = Eigen::VectorXd::Zero(V.ndof);
  r.g = Eigen::VectorXd::Zero(A.ndof);
  const QuadRule& qr = quad_rule(kSourceQuadDegree);
  const Eigen::MatrixXd phi = eval_dg_basis(U.order, qr.points);
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellMap map = CellMap::of(m, c);
    const auto d = U.dofs(c);
    for (std::size_t q = 0; q < qr.weights.size(); ++q) {
      const double fw = spec.source(map(qr.points[q])) * qr.weights[q] * map.detJ;
      for (int i = 0; i < U.ldofs; ++i) r.f1(d[i]) += fw * phi(i, q);
    }
  }
  if (!spec.exact) return r;

  const ManufacturedCase& ex = *spec.exact;
  const RTElement& el = rt_element(V.order);
  const int n = el.dim();
  std::vector<Point> val(n);
  std::vector<double> div(n);
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto g = m.edge_gamma(e);
    if (!g) continue;
    const bool lap_data = *g == Gamma::G0 || *g == Gamma::G2;
    const bool u_data = *g == Gamma::G0 || *g == Gamma::G1;
    if (!lap_data && !u_data) continue;
    const EdgeQuad q = edge_quad(m, e, kEdgeDataPoints);
    Eigen::VectorXd lv = Eigen::VectorXd::Zero(n), uv = Eigen::VectorXd::Zero(n);
    for (std::size_t p = 0; p < q.w.size(); ++p) {
      el.eval(q.xi[p], val.data(), div.data());
      const double wl = lap_data ? q.w[p] * ex.lap_u(q.x[p]) : 0.0;
      const double wu = u_data ? q.w[p] * ex.u(q.x[p]) : 0.0;
      for (int i = 0; i < n; ++i) {
        const double pn = dot(q.map.piola(val[i]), q.nscaled);
        lv(i) += wl * pn;
        uv(i) += wu * pn;
      }
    }
    const auto dv = V.dofs(q.cell), da = A.dofs(q.cell);
    const auto sv = V.signs(q.cell), sa = A.signs(q.cell);
    for (int i = 0; i < n; ++i) {
      r.f2(dv[i]) += sv[i] * lv(i);
      r.g(da[i]) += sa[i] * uv(i);
    }
  }
  return r;
}

void apply_strong_bc(const ProblemSpec& spec, FESpace& V, FESpace& A) {
  VectorFn vdata, adata;
  if (spec.exact) {
    const ManufacturedCase ex = *spec.exact;
    vdata = [ex](Point x) { return ex.v(x); };
    adata = [ex](Point x) { return ex.alpha(x); };
  }
  constrain_normal_trace(V, {Gamma::G3}, vdata);
  constrain_normal_trace(A, {Gamma::G2, Gamma::G3}, adata);
}

namespace {

void append_block(std::vector<Triplet>& t, const SpMat& B, int r0, int c0, bool transpose) {
  for (int r = 0; r < B.outerSize(); ++r)
    for (SpMat::InnerIterator it(B, r); it; ++it) {
      if (transpose)
        t.emplace_back(r0 + int(it.col()), c0 + r, it.value());
      else
        t.emplace_back(r0 + r, c0 + int(it.col()), it.value());
    }
}

std::vector<Triplet> block_triplets(const BlockSystem& s) {
  std::vector<Triplet> t;
  t.reserve(std::size_t(s.A11.nonZeros() + s.A22.nonZeros() + 2 * (s.B1.nonZeros() + s.B2.nonZeros())));
  const BlockLayout& L = s.layout;
  append_block(t, s.A11, 0, 0, false);
  append_block(t, s.A22, L.offset_v(), L.offset_v(), false);
  append_block(t, s.B1, L.offset_a(), 0, false);
  append_block(t, s.B1, 0, L.offset_a(), true);
  append_block(t, s.B2, L.offset_a(), L.offset_v(), false);
  append_block(t, s.B2, L.offset_v(), L.offset_a(), true);
  return t;
}

} // namespace

SpMat monolithic(const BlockSystem& s) {
  return from_triplets(s.size(), s.size(), block_triplets(s));
}

BlockSystem assemble_system(const ProblemSpec& spec, std::shared_ptr<const Mesh2D> mesh, const AssemblyOptions& opt) {
  check_admissible(spec);
  if (!mesh->labeled()) mesh = std::make_shared<const Mesh2D>(label_boundary(*mesh, spec.gamma));
  if (opt.aux_weight && !(*opt.aux_weight > 0.0)) throw Error("auxiliary weight must be positive");

  BlockSystem s;
  s.U = make_dg_space(mesh, spec.k);
  s.V = make_rt_space(mesh, spec.k + 1);
  s.A = make_rt_space(mesh, spec.k + 1);
  apply_strong_bc(spec, s.V, s.A);
  s.layout = {s.U.ndof, s.V.ndof, s.A.ndof};

  auto [A11, A22] = assemble_a(spec, s.U, s.V, opt.policy);
  if (opt.aux_weight) A11 = *opt.aux_weight * assemble_dg_mass(s.U, opt.policy);
  auto [B1, B2] = assemble_b(s.U, s.V, s.A, opt.policy);
  BlockRhs r = assemble_rhs(spec, s.U, s.V, s.A);
  if (mesh->has_gamma({Gamma::G1})) {
    s.lambda = spec.lambda ? *spec.lambda : default_lambda(spec.k, *mesh);
    NitscheTerms nt = assemble_nitsche(spec, s.V, s.lambda);
    A22 += nt.A22;
    r.f2 += nt.f2;
  }
  s.A11 = std::move(A11);
  s.A22 = std::move(A22);
  s.B1 = std::move(B1);
  s.B2 = std::move(B2);
  s.f1 = std::move(r.f1);
  s.f2 = std::move(r.f2);
  s.g = std::move(r.g);

  const BlockLayout& L = s.layout;
  const int N = L.size();
  s.constrained.assign(std::size_t(N), 0);
  s.constrained_value = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < L.nv; ++i) {
    s.constrained[L.offset_v() + i] = s.V.constrained[i];
    s.constrained_value(L.offset_v() + i) = s.V.constrained_value[i];
  }
  for (int i = 0; i < L.na; ++i) {
    s.constrained[L.offset_a() + i] = s.A.constrained[i];
    s.constrained_value(L.offset_a() + i) = s.A.constrained_value[i];
  }

  s.rhs.resize(N);
  s.rhs << s.f1, s.f2, s.g;
  // symmetric elimination: move lifted columns to the rhs, keep identity rows
  std::vector<Triplet> all = block_triplets(s), kept;
  kept.reserve(all.size());
  for (const Triplet& t : all) {
    const bool rc = s.constrained[t.row()], cc = s.constrained[t.col()];
    if (!rc && !cc) {
      kept.push_back(t);
    } else if (!rc && cc) {
      s.rhs(t.row()) -= t.value() * s.constrained_value(t.col());
    }
  }
  for (int i = 0; i < N; ++i)
    if (s.constrained[i]) {
      kept.emplace_back(i, i, 1.0);
      s.rhs(i) = s.constrained_value(i);
    }
  s.K = from_triplets(N, N, kept);
  return s;
}

BlockSystem assemble_auxiliary(const ProblemSpec& spec, std::shared_ptr<const Mesh2D> mesh, double weight,
                               ExecPolicy policy) {
  AssemblyOptions opt;
  opt.aux_weight = weight;
  opt.policy = policy;
  return assemble_system(spec, std::move(mesh), opt);
}

} // namespace h2mixed
