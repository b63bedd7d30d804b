#include "h2mixed/mesh.hpp"

#include "h2mixed/exceptions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace h2mixed {

std::string to_string(Gamma g) { return "gamma" + std::to_string(int(g)); }

Gamma parse_gamma(const std::string& s) {
  std::string t = s;
  for (const char* prefix : {"gamma", "Gamma", "G", "g"}) {
    const std::string p(prefix);
    if (t.rfind(p, 0) == 0) {
      t = t.substr(p.size());
      break;
    }
  }
  if (t.size() == 1 && t[0] >= '0' && t[0] <= '3') return Gamma(t[0] - '0');
  throw Error("unknown boundary class '" + s + "' (expected gamma0..gamma3)");
}

std::string to_string(Domain d) { return d == Domain::UnitSquare ? "square" : "lshape"; }

const std::vector<std::string>& segment_names(Domain d) {
  static const std::vector<std::string> square{"S", "E", "N", "W"};
  static const std::vector<std::string> lshape{"L0", "L1", "L2", "L3", "L4", "L5"};
  return d == Domain::UnitSquare ? square : lshape;
}

GammaPartition GammaPartition::uniform(Domain d, Gamma g) {
  GammaPartition p;
  for (const auto& s : segment_names(d)) p.segments[s] = g;
  return p;
}

std::optional<Gamma> Mesh2D::edge_gamma(int e) const {
  const int s = edge_segment[e];
  if (s < 0 || segment_gamma.empty() || segment_gamma[s] < 0) return std::nullopt;
  return Gamma(segment_gamma[s]);
}

bool Mesh2D::labeled() const {
  return !segment_gamma.empty() &&
         std::all_of(segment_gamma.begin(), segment_gamma.end(), [](auto g) { return g >= 0; });
}

bool Mesh2D::has_gamma(GammaSet set) const {
  for (int e = 0; e < num_edges(); ++e) {
    auto g = edge_gamma(e);
    if (g && set.contains(*g)) return true;
  }
  return false;
}

double Mesh2D::signed_area(int c) const {
  const Point a = vertices[cells[c][0]], b = vertices[cells[c][1]], d = vertices[cells[c][2]];
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y));
}

double Mesh2D::edge_length(int e) const {
  const Point t = vertices[edges[e][1]] - vertices[edges[e][0]];
  return std::hypot(t.x, t.y);
}

Point Mesh2D::edge_midpoint(int e) const {
  return 0.5 * (vertices[edges[e][0]] + vertices[edges[e][1]]);
}

Point Mesh2D::edge_normal(int e) const {
  const Point t = vertices[edges[e][1]] - vertices[edges[e][0]];
  const double l = std::hypot(t.x, t.y);
  return {t.y / l, -t.x / l};
}

namespace {

int classify_segment(Domain d, Point m) {
  if (d == Domain::UnitSquare) {
    if (m.y == 0.0) return 0;
    if (m.x == 1.0) return 1;
    if (m.y == 1.0) return 2;
    if (m.x == 0.0) return 3;
  } else {
    if (m.y == 0.0) return 0;
    if (m.x == 1.0) return 1;
    if (m.y == 0.5 && m.x > 0.5) return 2;
    if (m.x == 0.5 && m.y > 0.5) return 3;
    if (m.y == 1.0) return 4;
    if (m.x == 0.0) return 5;
  }
  throw Error("boundary edge at (" + std::to_string(m.x) + ", " + std::to_string(m.y) +
              ") lies on no named segment");
}

bool lex_less(Point a, Point b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }

// Renumbers raw vertices/cells into the canonical ordering and derives the
// edge topology. Returns the raw-cell -> canonical-cell permutation.
std::vector<int> finalize(Mesh2D& m, std::vector<Point> verts, std::vector<std::array<int, 3>> raw) {
  const int nv = int(verts.size());
  std::vector<int> vorder(nv);
  std::iota(vorder.begin(), vorder.end(), 0);
  std::sort(vorder.begin(), vorder.end(), [&](int a, int b) { return lex_less(verts[a], verts[b]); });
  std::vector<int> vnew(nv);
  m.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) {
    vnew[vorder[i]] = i;
    m.vertices[i] = verts[vorder[i]];
  }

  for (auto& c : raw) {
    for (int& v : c) v = vnew[v];
    const int r = int(std::min_element(c.begin(), c.end()) - c.begin());
    std::rotate(c.begin(), c.begin() + r, c.end());
  }

  const int nc = int(raw.size());
  std::vector<int> corder(nc);
  std::iota(corder.begin(), corder.end(), 0);
  auto key = [&](int c) {
    Point s{};
    for (int v : raw[c]) s = s + m.vertices[v];
    return s;
  };
  std::stable_sort(corder.begin(), corder.end(), [&](int a, int b) { return lex_less(key(a), key(b)); });
  std::vector<int> cnew(nc);
  m.cells.resize(nc);
  for (int i = 0; i < nc; ++i) {
    cnew[corder[i]] = i;
    m.cells[i] = raw[corder[i]];
  }

  m.edges.clear();
  m.edge_cells.clear();
  m.cell_edges.assign(nc, {});
  std::unordered_map<long long, int> lookup;
  lookup.reserve(std::size_t(nc) * 2);
  for (int c = 0; c < nc; ++c) {
    if (m.signed_area(c) <= 0.0) throw Error("cell " + std::to_string(c) + " has nonpositive area");
    for (int i = 0; i < 3; ++i) {
      const int a = m.cells[c][(i + 1) % 3], b = m.cells[c][(i + 2) % 3];
      const int lo = std::min(a, b), hi = std::max(a, b);
      const long long k = (long long)lo * nv + hi;
      auto [it, inserted] = lookup.try_emplace(k, m.num_edges());
      if (inserted) {
        m.edges.push_back({lo, hi});
        m.edge_cells.push_back({c, -1});
      } else {
        auto& ec = m.edge_cells[it->second];
        if (ec[1] >= 0) throw Error("edge shared by more than two cells");
        ec[1] = c;
      }
      m.cell_edges[c][i] = {it->second, a < b ? 1 : -1};
    }
  }

  m.edge_segment.assign(m.num_edges(), -1);
  for (int e = 0; e < m.num_edges(); ++e)
    if (m.is_boundary_edge(e)) m.edge_segment[e] = classify_segment(m.domain, m.edge_midpoint(e));
  m.segment_gamma.assign(segment_names(m.domain).size(), -1);
  return cnew;
}

} // namespace

Mesh2D build_unit_square_right(int n) {
  if (n < 1) throw Error("unit square mesh needs n >= 1");
  Mesh2D m;
  m.domain = Domain::UnitSquare;
  m.n = n;
  std::vector<Point> verts;
  verts.reserve(std::size_t(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.push_back({double(i) / n, double(j) / n});
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(std::size_t(2) * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // diagonal from top-left to bottom-right
      cells.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
      cells.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  finalize(m, std::move(verts), std::move(cells));
  return m;
}

Mesh2D build_lshape_crossed(int n) {
  if (n < 2 || n % 2 != 0) throw Error("L-shaped mesh needs an even n >= 2");
  Mesh2D m;
  m.domain = Domain::LShape;
  m.n = n;
  const int half = n / 2;
  auto kept = [half](int i, int j) { return !(i >= half && j >= half); };
  std::vector<int> grid(std::size_t(n + 1) * (n + 1), -1);
  std::vector<Point> verts;
  auto vid = [&](int i, int j) {
    int& g = grid[std::size_t(j) * (n + 1) + i];
    if (g < 0) {
      g = int(verts.size());
      verts.push_back({double(i) / n, double(j) / n});
    }
    return g;
  };
  std::vector<std::array<int, 3>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!kept(i, j)) continue;
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      const int c = int(verts.size());
      verts.push_back({(i + 0.5) / n, (j + 0.5) / n});
      cells.push_back({v00, v10, c});
      cells.push_back({v10, v11, c});
      cells.push_back({v11, v01, c});
      cells.push_back({v01, v00, c});
    }
  finalize(m, std::move(verts), std::move(cells));
  return m;
}

Mesh2D refine_uniform(const std::shared_ptr<const Mesh2D>& coarse) {
  if (!coarse) throw Error("refine_uniform: null mesh");
  const Mesh2D& cm = *coarse;
  Mesh2D m;
  m.domain = cm.domain;
  m.n = 2 * cm.n;
  m.level = cm.level + 1;
  std::vector<Point> verts = cm.vertices;
  const int nv0 = cm.num_vertices();
  for (int e = 0; e < cm.num_edges(); ++e) verts.push_back(cm.edge_midpoint(e));
  std::vector<std::array<int, 3>> cells;
  cells.reserve(std::size_t(4) * cm.num_cells());
  for (int c = 0; c < cm.num_cells(); ++c) {
    const auto [a, b, d] = cm.cells[c];
    const int m0 = nv0 + cm.cell_edges[c][0].edge;
    const int m1 = nv0 + cm.cell_edges[c][1].edge;
    const int m2 = nv0 + cm.cell_edges[c][2].edge;
    cells.push_back({a, m2, m1});
    cells.push_back({m2, b, m0});
    cells.push_back({m1, m0, d});
    cells.push_back({m0, m1, m2});
  }
  const std::vector<int> perm = finalize(m, std::move(verts), std::move(cells));
  m.children.resize(cm.num_cells());
  for (int c = 0; c < cm.num_cells(); ++c)
    for (int i = 0; i < 4; ++i) m.children[c][i] = perm[4 * c + i];
  m.segment_gamma = cm.segment_gamma;
  m.parent = coarse;
  return m;
}

Mesh2D label_boundary(const Mesh2D& mesh, const GammaPartition& part) {
  const auto& names = segment_names(mesh.domain);
  for (const auto& [name, g] : part.segments) {
    (void)g;
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw Error("boundary segment '" + name + "' does not exist on the " + to_string(mesh.domain) + " domain");
  }
  Mesh2D out = mesh;
  out.segment_gamma.assign(names.size(), -1);
  for (std::size_t s = 0; s < names.size(); ++s) {
    auto it = part.segments.find(names[s]);
    if (it == part.segments.end()) throw Error("boundary segment '" + names[s] + "' has no boundary class");
    out.segment_gamma[s] = std::int8_t(it->second);
  }
  return out;
}

void write_mesh(std::ostream& os, const Mesh2D& m) {
  os << "# domain=" << to_string(m.domain) << " n=" << m.n << " level=" << m.level << "\n";
  os << "VERTICES " << m.num_vertices() << "\n";
  os.precision(17);
  for (int i = 0; i < m.num_vertices(); ++i) os << i << " " << m.vertices[i].x << " " << m.vertices[i].y << "\n";
  os << "CELLS " << m.num_cells() << "\n";
  for (const auto& c : m.cells) os << c[0] << " " << c[1] << " " << c[2] << "\n";
  int nb = 0;
  for (int e = 0; e < m.num_edges(); ++e) nb += m.is_boundary_edge(e);
  os << "BOUNDARY " << nb << "\n";
  const auto& names = segment_names(m.domain);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (!m.is_boundary_edge(e)) continue;
    auto g = m.edge_gamma(e);
    os << e << " " << names[m.edge_segment[e]] << " " << (g ? to_string(*g) : std::string("none")) << "\n";
  }
}

} // namespace h2mixed
