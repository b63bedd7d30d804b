#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace h2mixed {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Boundary-condition classes. Which quantities are prescribed on each:
///   G0: u, Δu          G1: u, ∂u/∂n (clamped)
///   G2: ∂(Δu-c0 u)/∂n, Δu          G3: ∂(Δu-c0 u)/∂n, ∂u/∂n
enum class Gamma : std::uint8_t { G0 = 0, G1 = 1, G2 = 2, G3 = 3 };

std::string to_string(Gamma g);
Gamma parse_gamma(const std::string& s);

/// Small bit set over the four boundary classes.
class GammaSet {
public:
  constexpr GammaSet() = default;
  constexpr GammaSet(std::initializer_list<Gamma> gs) {
    for (Gamma g : gs) bits_ |= bit(g);
  }
  constexpr bool contains(Gamma g) const { return (bits_ & bit(g)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr GammaSet operator|(GammaSet o) const {
    GammaSet r;
    r.bits_ = bits_ | o.bits_;
    return r;
  }

private:
  static constexpr std::uint8_t bit(Gamma g) { return std::uint8_t(1u << unsigned(g)); }
  std::uint8_t bits_ = 0;
};

enum class Domain { UnitSquare, LShape };

std::string to_string(Domain d);

/// Named boundary segments of a domain, in counter-clockwise order.
///   UnitSquare: S, E, N, W
///   LShape:     L0 (0,0)->(1,0), L1 (1,0)->(1,1/2), L2 (1,1/2)->(1/2,1/2),
///               L3 (1/2,1/2)->(1/2,1), L4 (1/2,1)->(0,1), L5 (0,1)->(0,0)
const std::vector<std::string>& segment_names(Domain d);

/// Assignment of a boundary class to every named segment.
struct GammaPartition {
  std::map<std::string, Gamma> segments;

  /// The same class on every segment of `d`.
  static GammaPartition uniform(Domain d, Gamma g);
};

/// An edge as seen from a cell: global index and the sign relating the
/// global edge normal to the cell's outward normal (+1: they agree).
struct CellEdge {
  int edge = -1;
  int sign = 1;
};

/// Structured triangular mesh of the unit square or the L-shaped domain.
///
/// Conventions:
///  - vertices are numbered lexicographically by (y, x);
///  - cells are counter-clockwise, rotated so the lexicographically smallest
///    vertex comes first, and ordered by centroid (y, x);
///  - local edge i is opposite local vertex i;
///  - edges run from the lower to the higher vertex index, and the global
///    normal is the tangent rotated 90 degrees clockwise.
/// These make the numbering translation invariant, so congruent star patches
/// produce bitwise identical local matrices.
struct Mesh2D {
  Domain domain = Domain::UnitSquare;
  int n = 0;     ///< grid squares per unit length; h = 1/n
  int level = 0; ///< refinement level, 0 = built directly

  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<CellEdge, 3>> cell_edges;
  std::vector<std::array<int, 2>> edge_cells; ///< second entry -1 on the boundary
  std::vector<int> edge_segment;              ///< index into segment_names(domain), -1 if interior
  std::vector<std::int8_t> segment_gamma;     ///< per segment, -1 if unlabeled

  std::shared_ptr<const Mesh2D> parent;       ///< coarser mesh this one refines, if any
  std::vector<std::array<int, 4>> children;   ///< parent cell -> its 4 cells in this mesh

  double h() const { return 1.0 / n; }
  int num_vertices() const { return int(vertices.size()); }
  int num_cells() const { return int(cells.size()); }
  int num_edges() const { return int(edges.size()); }

  bool is_boundary_edge(int e) const { return edge_cells[e][1] < 0; }
  /// Boundary class of edge e, empty for interior or unlabeled edges.
  std::optional<Gamma> edge_gamma(int e) const;
  bool labeled() const;
  /// True when some labeled boundary edge carries a class in `set`.
  bool has_gamma(GammaSet set) const;

  double signed_area(int c) const;
  double edge_length(int e) const;
  Point edge_midpoint(int e) const;
  /// Unit global normal of edge e.
  Point edge_normal(int e) const;
};

Mesh2D build_unit_square_right(int n);
Mesh2D build_lshape_crossed(int n);

/// Uniform red refinement: each triangle split into 4 by its edge midpoints.
/// The result records `coarse` as its parent together with the nesting map.
Mesh2D refine_uniform(const std::shared_ptr<const Mesh2D>& coarse);

/// Returns a copy of `mesh` with every boundary edge carrying the class of its segment.
Mesh2D label_boundary(const Mesh2D& mesh, const GammaPartition& part);

/// Debug dump: VERTICES / CELLS / BOUNDARY sections.
void write_mesh(std::ostream& os, const Mesh2D& mesh);

} // namespace h2mixed
