#include "h2mixed/problem.hpp"

#include "h2mixed/exceptions.hpp"

#include <cmath>

namespace h2mixed {

double ProblemSpec::source(Point x) const {
  if (exact) return exact->f(x);
  return f ? f(x) : 0.0;
}

bool ProblemSpec::has(Gamma g) const {
  for (const auto& [name, cls] : gamma.segments)
    if (cls == g) return true;
  return false;
}

void check_admissible(const ProblemSpec& s) {
  if (!(s.c0 >= 0.0)) throw InadmissibleProblem("c0 must be nonnegative");
  if (!(s.c1 >= 0.0)) throw InadmissibleProblem("c1 must be nonnegative");
  if (s.k < 0 || s.k > kMaxDGOrder) throw InadmissibleProblem("polynomial order k must be in 0..3");
  if (s.has(Gamma::G2) && (s.c0 == 0.0 || s.c1 == 0.0))
    throw InadmissibleProblem("a gamma2 boundary requires c0 > 0 and c1 > 0");
  if (!s.has(Gamma::G0) && !s.has(Gamma::G1) && s.c1 == 0.0)
    throw InadmissibleProblem("without gamma0 or gamma1 boundary, c1 must be positive");
  if (s.has(Gamma::G1) && s.lambda && !(*s.lambda > 0.0))
    throw InadmissibleProblem("the Nitsche penalty lambda must be positive");
  if (s.exact && (s.exact->c0 != s.c0 || s.exact->c1 != s.c1))
    throw InadmissibleProblem("manufactured case coefficients differ from the problem coefficients");
}

double trace_constant_unscaled(int k, const Mesh2D& m) {
  double best = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    bool touches = false;
    double perim = 0.0;
    for (const CellEdge& ce : m.cell_edges[c]) {
      touches |= m.is_boundary_edge(ce.edge);
      perim += m.edge_length(ce.edge);
    }
    if (touches) best = std::max(best, (k + 1) * (k + 2) * perim / (2.0 * m.signed_area(c)));
  }
  return best;
}

double trace_constant(int k, const Mesh2D& m) { return m.h() * trace_constant_unscaled(k, m); }

double default_lambda(int k, const Mesh2D& m) { return 3.0 * trace_constant(k, m) + 2.0; }

} // namespace h2mixed
