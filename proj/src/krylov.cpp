#include "h2mixed/krylov.hpp"

#include <chrono>
#include <cmath>

namespace h2mixed {

std::string to_string(StopReason r) {
  switch (r) {
  case StopReason::Absolute: return "absolute";
  case StopReason::Relative: return "relative";
  case StopReason::MaxIterations: return "maxit";
  case StopReason::Breakdown: return "breakdown";
  }
  return "unknown";
}

SolveReport fgmres(const LinearOp& A, const LinearOp& M, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                   const FGMRESOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const Eigen::Index n = b.size();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd r(n), w(n);
  A(x, w);
  r = b - w;
  const double r0 = r.norm();
  rep.residual_history.push_back(r0);
  const double target = std::max(opt.tol_abs, opt.tol_rel * r0);

  auto finish = [&](bool conv, StopReason why) {
    rep.converged = conv;
    rep.reason = why;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  auto reason_for = [&](double res) { return res <= opt.tol_abs ? StopReason::Absolute : StopReason::Relative; };

  if (r0 == 0.0) return finish(true, StopReason::Absolute);
  if (r0 <= target) return finish(true, reason_for(r0));

  const int m = opt.maxit;
  std::vector<Eigen::VectorXd> Vb, Zb;
  Vb.reserve(m + 1);
  Zb.reserve(m);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(m + 1);
  s(0) = r0;
  Vb.push_back(r / r0);

  auto update = [&](int j) {
    // solve the j x j upper triangular system and form x += Z y
    Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(s.head(j));
    for (int i = 0; i < j; ++i) x += y(i) * Zb[i];
  };

  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd z(n);
    M(Vb[j], z);
    Zb.push_back(std::move(z));
    A(Zb[j], w);
    for (int i = 0; i <= j; ++i) {
      H(i, j) = w.dot(Vb[i]);
      w -= H(i, j) * Vb[i];
    }
    const double hn = w.norm();
    H(j + 1, j) = hn;
    for (int i = 0; i < j; ++i) {
      const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
      H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
      H(i, j) = t;
    }
    const double den = std::hypot(H(j, j), H(j + 1, j));
    if (den == 0.0) {
      // the preconditioned direction is annihilated by A
      rep.iterations = j;
      update(j);
      return finish(false, StopReason::Breakdown);
    }
    cs(j) = H(j, j) / den;
    sn(j) = H(j + 1, j) / den;
    H(j, j) = den;
    H(j + 1, j) = 0.0;
    s(j + 1) = -sn(j) * s(j);
    s(j) = cs(j) * s(j);
    const double res = std::abs(s(j + 1));
    rep.residual_history.push_back(res);
    rep.iterations = j + 1;
    if (res <= target || hn == 0.0) {
      update(j + 1);
      if (res <= target) return finish(true, reason_for(res));
      // happy breakdown: the Krylov space is invariant, x is the minimizer
      return finish(res == 0.0, res == 0.0 ? StopReason::Absolute : StopReason::Breakdown);
    }
    Vb.push_back(w / hn);
  }
  update(m);
  return finish(false, StopReason::MaxIterations);
}

} // namespace h2mixed
