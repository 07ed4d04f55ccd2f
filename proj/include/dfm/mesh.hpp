// Conforming polyhedral meshes of the unit cube (-1/2,1/2)^3 carrying a fixed
// network of four planar fractures meeting along the line x = y = 0:
//   fracture 0: {x=0, y>0}   fracture 1: {y=0, x>0}
//   fracture 2: {x=0, y<0}   fracture 3: {y=0, x<0}
// which split the matrix into quadrant subdomains
//   1: {x<0,y>0}  2: {x>0,y>0}  3: {x>0,y<0}  4: {x<0,y<0}.
// Two generators: a Cartesian hexahedral grid and its Kuhn simplicial
// subdivision (6 tetrahedra per hexahedron, translation-invariant diagonal
// rule, hence conforming). Faces interior to the fracture planes are tagged
// with their fracture index; pressure unknowns may be duplicated across them.

#ifndef DFM_MESH_HPP
#define DFM_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace dfm
{

using Eigen::Vector3d;

/// Geometric tolerance for detecting entities on the fracture planes and on
/// the intersection line, relative to the unit domain size.
inline constexpr double geom_eps = 1e-12;

struct Mesh
{
  enum class Kind { hex, tet };

  Kind kind = Kind::hex;
  int n = 0;    ///< grid subdivisions per axis (even)
  double h = 0; ///< grid spacing

  std::vector<Vector3d> points;

  // Cells (CSR layouts; hexes carry 8 vertices / 6 faces, tets 4 / 4).
  std::vector<int> cell_vert_offsets, cell_verts;
  std::vector<int> cell_face_offsets, cell_faces;
  std::vector<Vector3d> cell_center;
  std::vector<double> cell_volume;
  std::vector<int> cell_subdomain; ///< quadrant 1..4 of the cell center

  // Faces, with vertices in cyclic order.
  std::vector<int> face_vert_offsets, face_verts;
  std::vector<std::array<int, 2>> face_cells; ///< second entry -1 on the boundary
  std::vector<Vector3d> face_center;
  std::vector<Vector3d> face_normal; ///< unit, points out of face_cells[0]
  std::vector<double> face_area;
  std::vector<int> face_frac; ///< fracture index 0..3, or -1

  // Edges; face_edges (CSR, aligned with the vertex loop: local edge i joins
  // loop vertices i and i+1).
  std::vector<std::array<int, 2>> edge_verts; ///< sorted pairs
  std::vector<int> face_edge_offsets, face_edges;

  // Boundary and fracture incidence flags.
  std::vector<char> vert_on_boundary, edge_on_boundary;
  std::vector<char> vert_on_frac, edge_on_frac;
  std::vector<char> vert_on_sigma, edge_on_sigma; ///< on the line x = y = 0

  // Dense renumberings of fracture entities.
  std::vector<int> frac_faces;                     ///< face ids with face_frac >= 0
  std::vector<int> face_frac_index;                ///< face id -> index in frac_faces, or -1
  std::vector<int> frac_verts, vert_frac_index;    ///< same for vertices on fractures
  std::vector<int> frac_edges, edge_frac_index;    ///< same for edges of fracture faces

  // Vertex -> adjacent cells (CSR).
  std::vector<int> vert_cell_offsets, vert_cells;

  int n_cells() const { return static_cast<int>(cell_center.size()); }
  int n_faces() const { return static_cast<int>(face_center.size()); }
  int n_verts() const { return static_cast<int>(points.size()); }
  int n_edges() const { return static_cast<int>(edge_verts.size()); }

  /// Outward unit normal of face f seen from cell c.
  Vector3d outward_normal(int f, int c) const
  {
    return face_cells[f][0] == c ? face_normal[f] : Vector3d(-face_normal[f]);
  }

  /// Vertices of face f.
  auto face_vertex_span(int f) const
  {
    return std::pair<const int*, int>{face_verts.data() + face_vert_offsets[f],
                                      face_vert_offsets[f + 1] - face_vert_offsets[f]};
  }
};

/// Cartesian hexahedral grid with n cells (n even) per axis.
Mesh build_cartesian_mesh(int n);

/// Kuhn simplicial subdivision: 6 tetrahedra per grid hexahedron.
Mesh build_kuhn_mesh(int n);

/// Matrix-side vertex unknowns: cells adjacent to a vertex, grouped by
/// connectivity through the non-fracture faces incident to that vertex.
/// A vertex interior to a fracture carries one group per side; a vertex on
/// the intersection line carries one per quadrant.
struct VertexClasses
{
  std::vector<int> vert_class_offsets; ///< per vertex: range of global class ids
  std::vector<int> class_cell_offsets, class_cells;
  std::vector<int> class_vertex;     ///< owning vertex of each class
  std::vector<int> class_subdomain;  ///< common quadrant of the member cells
  std::vector<int> vert_cell_class;  ///< aligned with Mesh::vert_cells: class id of (vertex, cell)

  int n_classes() const { return static_cast<int>(class_vertex.size()); }
  int classes_of(int v) const { return vert_class_offsets[v + 1] - vert_class_offsets[v]; }

  /// Global class id of cell c at vertex v.
  int class_of(const Mesh& m, int v, int c) const
  {
    for (int k = m.vert_cell_offsets[v]; k < m.vert_cell_offsets[v + 1]; ++k)
      if (m.vert_cells[k] == c) return vert_cell_class[k];
    return -1;
  }
};

VertexClasses build_vertex_classes(const Mesh& m);

/// Visit the sub-tetrahedra (x_K, x_sigma, s0, s1) of cell c, one per
/// (face, face-edge) pair: f(face_id, s0, s1).
template <class F>
void for_each_subtet(const Mesh& m, int c, F&& f)
{
  for (int kf = m.cell_face_offsets[c]; kf < m.cell_face_offsets[c + 1]; ++kf) {
    const int fc = m.cell_faces[kf];
    const int off = m.face_vert_offsets[fc];
    const int nv = m.face_vert_offsets[fc + 1] - off;
    for (int e = 0; e < nv; ++e)
      f(fc, m.face_verts[off + e], m.face_verts[off + (e + 1) % nv]);
  }
}

/// Visit the sub-triangles (x_sigma, s0, s1) of face fc: f(s0, s1).
template <class F>
void for_each_subtri(const Mesh& m, int fc, F&& f)
{
  const int off = m.face_vert_offsets[fc];
  const int nv = m.face_vert_offsets[fc + 1] - off;
  for (int e = 0; e < nv; ++e)
    f(m.face_verts[off + e], m.face_verts[off + (e + 1) % nv]);
}

/// Mesh size (largest sub-tetrahedron diameter) and shape regularity
/// (largest ratio diameter / insphere diameter over the sub-tetrahedra).
struct MeshQuality
{
  double h_max = 0;
  double theta_max = 0;
};

MeshQuality compute_quality(const Mesh& m);

} // namespace dfm

#endif
