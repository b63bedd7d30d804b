#include "h2mixed/multigrid.hpp"

#include "h2mixed/exceptions.hpp"

#include <algorithm>
#include <cstring>
#include <string_view>
#include <unordered_map>

namespace h2mixed {

// ---------------------------------------------------------------- Vanka

Eigen::MatrixXd VankaSmoother::gather(const SpMat& K, const std::vector<int>& dofs) {
  const int n = int(dofs.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (SpMat::InnerIterator it(K, dofs[a]); it; ++it) {
      const auto pos = std::lower_bound(dofs.begin(), dofs.end(), int(it.col()));
      if (pos != dofs.end() && *pos == it.col()) M(a, int(pos - dofs.begin())) = it.value();
    }
  return M;
}

VankaSmoother::VankaSmoother(const SpMat& K, std::vector<StarPatch> patches, const std::vector<char>& constrained)
    : patches_(std::move(patches)) {
  const int N = int(K.rows());
  for (int i = 0; i < N; ++i)
    if (constrained[i]) identity_dofs_.push_back(i);

  std::unordered_map<std::size_t, std::vector<int>> by_hash;
  std::vector<Eigen::MatrixXd> reps;
  factor_of_.resize(patches_.size());
  buf_offset_.resize(patches_.size());
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    buf_offset_[p] = buf_size_;
    buf_size_ += patches_[p].dofs.size();
    Eigen::MatrixXd M = gather(K, patches_[p].dofs);
    const std::string_view bytes(reinterpret_cast<const char*>(M.data()), sizeof(double) * std::size_t(M.size()));
    const std::size_t h = std::hash<std::string_view>{}(bytes) ^ std::size_t(M.rows());
    int found = -1;
    for (int f : by_hash[h]) {
      const auto& R = reps[f];
      if (R.rows() == M.rows() && std::memcmp(R.data(), M.data(), bytes.size()) == 0) {
        found = f;
        break;
      }
    }
    if (found < 0) {
      PatchFactor pf;
      pf.d = M.cwiseAbs().rowwise().maxCoeff().cwiseSqrt().cwiseInverse();
      if (!pf.d.allFinite())
        throw SolverError("star patch around vertex " + std::to_string(patches_[p].vertex) + " has a zero row");
      pf.lu.compute(pf.d.asDiagonal() * M * pf.d.asDiagonal());
      const double rc = pf.lu.rcond();
      if (!(rc > 1e-14)) {
        throw SolverError("star patch around vertex " + std::to_string(patches_[p].vertex) + " (" +
                          std::to_string(patches_[p].dofs.size()) + " DoFs) is singular, rcond " +
                          std::to_string(rc));
      }
      found = int(factors_.size());
      factors_.push_back(std::move(pf));
      reps.push_back(std::move(M));
      by_hash[h].push_back(found);
    }
    factor_of_[p] = found;
  }

  gather_ptr_.assign(std::size_t(N) + 1, 0);
  for (const auto& p : patches_)
    for (int d : p.dofs) ++gather_ptr_[d + 1];
  for (int i = 0; i < N; ++i) gather_ptr_[i + 1] += gather_ptr_[i];
  gather_slot_.resize(gather_ptr_[N]);
  std::vector<int> fill(gather_ptr_.begin(), gather_ptr_.end() - 1);
  for (std::size_t p = 0; p < patches_.size(); ++p)
    for (std::size_t a = 0; a < patches_[p].dofs.size(); ++a)
      gather_slot_[fill[patches_[p].dofs[a]]++] = buf_offset_[p] + a;
}

void VankaSmoother::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z, ExecPolicy policy) const {
  const int N = int(r.size());
  z = Eigen::VectorXd::Zero(N);
  const int np = int(patches_.size());
  if (policy == ExecPolicy::Serial) {
    // reference: scatter-add patch by patch
    Eigen::VectorXd rp, sol;
    for (int p = 0; p < np; ++p) {
      const auto& d = patches_[p].dofs;
      rp.resize(Eigen::Index(d.size()));
      for (std::size_t a = 0; a < d.size(); ++a) rp(a) = r(d[a]);
      sol = factors_[factor_of_[p]].solve(rp);
      for (std::size_t a = 0; a < d.size(); ++a) z(d[a]) += sol(a);
    }
  } else {
    // local solves into private slots, then a per-DoF sum in patch order
    std::vector<double> buf(buf_size_);
    kernels::parallel_for(policy, np, [&](int p) {
      const auto& d = patches_[p].dofs;
      Eigen::VectorXd rp(Eigen::Index(d.size()));
      for (std::size_t a = 0; a < d.size(); ++a) rp(a) = r(d[a]);
      Eigen::Map<Eigen::VectorXd>(buf.data() + buf_offset_[p], rp.size()) = factors_[factor_of_[p]].solve(rp);
    });
    kernels::parallel_for(policy, N, [&](int i) {
      double s = 0.0;
      for (int k = gather_ptr_[i]; k < gather_ptr_[i + 1]; ++k) s += buf[gather_slot_[k]];
      z(i) = s;
    });
  }
  for (int i : identity_dofs_) z(i) = r(i);
}

// ---------------------------------------------------------------- transfer

namespace {

struct Entry {
  int row, col;
  double val;
};

void add_block(std::vector<Entry>& out, const std::vector<Entry>& block, int roff, int coff) {
  for (const Entry& e : block) out.push_back({e.row + roff, e.col + coff, e.val});
}

constexpr double kDropTol = 1e-13;

} // namespace

SpMat build_prolongation(const BlockSystem& C, const BlockSystem& F) {
  const Mesh2D& cm = *C.U.mesh;
  const Mesh2D& fm = *F.U.mesh;
  if (fm.parent.get() != &cm || int(fm.children.size()) != cm.num_cells())
    throw Error("build_prolongation: fine mesh is not a refinement of the coarse mesh");

  const int k = C.U.order;
  const DGElement& dg = dg_element(k);
  const RTElement& rt = rt_element(k + 1);
  const int nd = dg.dim(), nr = rt.dim();
  std::vector<Entry> pu, pv;
  std::vector<double> dval(nd);
  std::vector<Point> rval(nr);
  std::vector<double> rdiv(nr);

  for (int cc = 0; cc < cm.num_cells(); ++cc) {
    const CellMap cmap = CellMap::of(cm, cc);
    const auto cdu = C.U.dofs(cc);
    const auto cdv = C.V.dofs(cc);
    const auto csv = C.V.signs(cc);
    for (int ch : fm.children[cc]) {
      const CellMap fmap = CellMap::of(fm, ch);
      // DG: exact L2 projection of each coarse basis function
      const auto fdu = F.U.dofs(ch);
      for (int i = 0; i < nd; ++i) {
        const Eigen::VectorXd loc = local_interp_dg(
            F.U, ch,
            [&](Point x) {
              dg.eval(to_reference(cmap, x), dval.data());
              return dval[i];
            },
            2 * k);
        for (int j = 0; j < nd; ++j)
          if (std::abs(loc(j)) > kDropTol) pu.push_back({fdu[j], cdu[i], loc(j)});
      }
      // RT: moments of all coarse basis functions at once
      auto sample = [&](Point xi_f, std::vector<Point>& pulled) {
        const Point x = fmap(xi_f);
        rt.eval(to_reference(cmap, x), rval.data(), rdiv.data());
        for (int i = 0; i < nr; ++i) pulled[i] = fmap.piola_pullback(csv[i] * cmap.piola(rval[i]));
      };
      std::vector<std::vector<std::vector<Point>>> ev(nr, std::vector<std::vector<Point>>(3));
      std::vector<std::vector<Point>> iv(nr);
      std::vector<Point> pulled(nr);
      for (int e = 0; e < 3; ++e)
        for (const Point& p : rt.edge_points()[e]) {
          sample(p, pulled);
          for (int i = 0; i < nr; ++i) ev[i][e].push_back(pulled[i]);
        }
      for (const Point& p : rt.interior_points()) {
        sample(p, pulled);
        for (int i = 0; i < nr; ++i) iv[i].push_back(pulled[i]);
      }
      const auto fdv = F.V.dofs(ch);
      const auto fsv = F.V.signs(ch);
      for (int i = 0; i < nr; ++i) {
        const Eigen::VectorXd loc = rt.dofs(ev[i], iv[i]);
        for (int j = 0; j < nr; ++j) {
          const double v = fsv[j] * loc(j);
          if (std::abs(v) > kDropTol) pv.push_back({fdv[j], cdv[i], v});
        }
      }
    }
  }

  std::vector<Entry> all;
  all.reserve(pu.size() + 2 * pv.size());
  add_block(all, pu, 0, 0);
  add_block(all, pv, F.layout.offset_v(), C.layout.offset_v());
  add_block(all, pv, F.layout.offset_a(), C.layout.offset_a());
  // set semantics: an entry reached from several cells keeps its first value
  std::stable_sort(all.begin(), all.end(),
                   [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  std::vector<Triplet> trip;
  trip.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (i == 0 || all[i].row != all[i - 1].row || all[i].col != all[i - 1].col)
      trip.emplace_back(all[i].row, all[i].col, all[i].val);
  return from_triplets(F.size(), C.size(), trip);
}

// ---------------------------------------------------------------- hierarchy

std::shared_ptr<const Mesh2D> coarse_mesh(Domain d, int n, const GammaPartition& part) {
  Mesh2D m = d == Domain::UnitSquare ? build_unit_square_right(n) : build_lshape_crossed(n);
  return std::make_shared<const Mesh2D>(label_boundary(m, part));
}

MGHierarchy MGHierarchy::build(const ProblemSpec& spec, int finest_n, const MGOptions& opt) {
  int nl = 1;
  for (int n = opt.coarsest_n; n < finest_n; n *= 2) ++nl;
  if (finest_n < 2 * opt.coarsest_n || (opt.coarsest_n << (nl - 1)) != finest_n)
    throw Error("multigrid needs finest n = " + std::to_string(opt.coarsest_n) +
                " * 2^L with L >= 1, got " + std::to_string(finest_n));
  MGHierarchy H;
  H.opt_ = opt;
  std::shared_ptr<const Mesh2D> mesh = coarse_mesh(spec.domain, opt.coarsest_n, spec.gamma);
  for (int l = 0; l < nl; ++l) {
    if (l > 0) mesh = std::make_shared<const Mesh2D>(refine_uniform(mesh));
    MGLevel lev;
    lev.mesh = mesh;
    AssemblyOptions aopt;
    aopt.policy = opt.policy;
    if (opt.aux_weight_inv_h)
      aopt.aux_weight = double(mesh->n);
    else
      aopt.aux_weight = opt.aux_weight;
    lev.sys = assemble_system(spec, mesh, aopt);
    if (l > 0) {
      lev.P = build_prolongation(H.levels_.back().sys, lev.sys);
      lev.vanka = std::make_unique<VankaSmoother>(lev.sys.K, star_patches(lev.sys.U, lev.sys.V, lev.sys.A),
                                                  lev.sys.constrained);
    }
    H.levels_.push_back(std::move(lev));
  }
  H.coarse_.factorize(H.levels_[0].sys.K);
  return H;
}

void MGHierarchy::relax(int l, Eigen::VectorXd& x, const Eigen::VectorXd& b) const {
  const MGLevel& L = levels_[l];
  const LinearOp A = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    out.resize(in.size());
    kernels::spmv(opt_.policy, L.sys.K, in.data(), out.data());
  };
  const LinearOp M = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { L.vanka->apply(in, out, opt_.policy); };
  FGMRESOptions fo;
  fo.tol_abs = 0.0;
  fo.tol_rel = 0.0;
  fo.maxit = opt_.relax_steps;
  fgmres(A, M, b, x, fo);
}

void MGHierarchy::v_cycle(int l, Eigen::VectorXd& x, const Eigen::VectorXd& b) const {
  if (l == 0) {
    x = coarse_.solve(b);
    return;
  }
  const MGLevel& L = levels_[l];
  const MGLevel& C = levels_[l - 1];
  relax(l, x, b);
  Eigen::VectorXd r(b.size());
  kernels::spmv(opt_.policy, L.sys.K, x.data(), r.data());
  r = b - r;
  for (int i = 0; i < r.size(); ++i)
    if (L.sys.constrained[i]) r(i) = 0.0;
  Eigen::VectorXd rc = L.P.transpose() * r;
  for (int i = 0; i < rc.size(); ++i)
    if (C.sys.constrained[i]) rc(i) = 0.0;
  Eigen::VectorXd ec = Eigen::VectorXd::Zero(rc.size());
  v_cycle(l - 1, ec, rc);
  Eigen::VectorXd ef = L.P * ec;
  for (int i = 0; i < ef.size(); ++i)
    if (L.sys.constrained[i]) ef(i) = 0.0;
  x += ef;
  relax(l, x, b);
}

void MGHierarchy::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const int top = num_levels() - 1;
  const auto& mask = levels_[top].sys.constrained;
  Eigen::VectorXd b = r;
  for (int i = 0; i < b.size(); ++i)
    if (mask[i]) b(i) = 0.0;
  z = Eigen::VectorXd::Zero(r.size());
  v_cycle(top, z, b);
  for (int i = 0; i < z.size(); ++i)
    if (mask[i]) z(i) = r(i);
}

MGSolveResult solve_mg(const BlockSystem& sys, const MGHierarchy& mg, const FGMRESOptions& opt) {
  if (sys.size() != mg.finest().sys.size()) throw Error("solve_mg: system and hierarchy sizes differ");
  MGSolveResult res;
  res.x = sys.constrained_value;
  const ExecPolicy pol = mg.options().policy;
  const LinearOp A = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    out.resize(in.size());
    kernels::spmv(pol, sys.K, in.data(), out.data());
  };
  const LinearOp M = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { mg.apply(in, out); };
  res.report = fgmres(A, M, sys.rhs, res.x, opt);
  return res;
}

} // namespace h2mixed
