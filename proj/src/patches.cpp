#include "h2mixed/patches.hpp"

#include "h2mixed/exceptions.hpp"

#include <algorithm>

namespace h2mixed {

std::vector<StarPatch> star_patches(const FESpace& U, const FESpace& V, const FESpace& A) {
  const Mesh2D& m = *U.mesh;
  if (V.mesh.get() != &m || A.mesh.get() != &m) throw Error("star_patches: spaces live on different meshes");
  const BlockLayout L{U.ndof, V.ndof, A.ndof};
  const int k1 = V.order;
  const int ni = rt_interior_dofs(k1);

  std::vector<std::vector<int>> vcells(m.num_vertices()), vedges(m.num_vertices());
  for (int c = 0; c < m.num_cells(); ++c)
    for (int v : m.cells[c]) vcells[v].push_back(c);
  for (int e = 0; e < m.num_edges(); ++e)
    for (int v : m.edges[e]) vedges[v].push_back(e);

  auto add_rt = [&](std::vector<int>& out, const FESpace& S, int offset, int first, int count) {
    for (int d = first; d < first + count; ++d)
      if (!S.constrained[d]) out.push_back(offset + d);
  };

  std::vector<StarPatch> patches;
  patches.reserve(m.num_vertices());
  for (int vtx = 0; vtx < m.num_vertices(); ++vtx) {
    StarPatch p;
    p.vertex = vtx;
    for (int c : vcells[vtx]) {
      for (int d : U.dofs(c))
        if (!U.constrained[d]) p.dofs.push_back(d);
      const int first = m.num_edges() * k1 + c * ni;
      add_rt(p.dofs, V, L.offset_v(), first, ni);
      add_rt(p.dofs, A, L.offset_a(), first, ni);
    }
    for (int e : vedges[vtx]) {
      add_rt(p.dofs, V, L.offset_v(), e * k1, k1);
      add_rt(p.dofs, A, L.offset_a(), e * k1, k1);
    }
    std::sort(p.dofs.begin(), p.dofs.end());
    if (!p.dofs.empty()) patches.push_back(std::move(p));
  }
  return patches;
}

} // namespace h2mixed
