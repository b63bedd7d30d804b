#pragma once

#include "h2mixed/fespace.hpp"

#include <vector>

namespace h2mixed {

/// Block layout of the monolithic unknown vector [u; v; alpha].
struct BlockLayout {
  int nu = 0, nv = 0, na = 0;
  int offset_v() const { return nu; }
  int offset_a() const { return nu + nv; }
  int size() const { return nu + nv + na; }
};

/// All unconstrained DoFs on the topological star of one vertex:
/// u-DoFs of the incident cells, v- and alpha-DoFs on incident edges and
/// incident cell interiors. Indices refer to the monolithic vector, sorted.
struct StarPatch {
  int vertex = -1;
  std::vector<int> dofs;
};

/// One patch per vertex; patches left empty by constraints are dropped.
std::vector<StarPatch> star_patches(const FESpace& U, const FESpace& V, const FESpace& A);

} // namespace h2mixed
