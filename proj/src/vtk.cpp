// Legacy ASCII VTK writer.

#include <dfm/vtk.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace dfm
{

namespace
{

int vtk_cell_type(int n_verts_3d)
{
  return n_verts_3d == 8 ? 12 /*hexahedron*/ : 10 /*tetra*/;
}

int vtk_face_type(int n_verts_2d)
{
  return n_verts_2d == 4 ? 9 /*quad*/ : 5 /*triangle*/;
}

} // namespace

void write_vtk(const Scheme& s, const Eigen::VectorXd& u, std::ostream& out)
{
  const Mesh& m = s.mesh();
  const int nc = m.n_cells();
  const int nff = static_cast<int>(m.frac_faces.size());

  // Per fracture face: magnitude of the face-mean reconstructed jump over
  // both sides, same face means the error norms use.
  std::vector<double> jump_mag(nff, 0.0);
  s.for_each_mf_block([&](const MfBlock& blk) {
    const int ffi = m.face_frac_index[blk.face];
    const Eigen::VectorXd phi = s.face_pairing(blk.face, [](const Vector3d&) { return 1.0; });
    double acc = 0;
    for (int side = 0; side < 2; ++side) {
      double jh = 0;
      for (int k = 0; k < static_cast<int>(blk.frac_dofs.size()); ++k)
        jh += phi[k] * (u[blk.side_dofs[side][k]] - u[blk.frac_dofs[k]]);
      jh /= m.face_area[blk.face];
      acc += jh * jh;
    }
    jump_mag[ffi] = std::sqrt(acc);
  });

  char buf[128];
  out << "# vtk DataFile Version 3.0\n";
  out << "fractured porous medium, " << s.name() << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << m.n_verts() << " double\n";
  for (const Vector3d& p : m.points) {
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
    out << buf;
  }

  int list_len = 0;
  for (int c = 0; c < nc; ++c)
    list_len += 1 + (m.cell_vert_offsets[c + 1] - m.cell_vert_offsets[c]);
  for (int ffi = 0; ffi < nff; ++ffi)
    list_len += 1 + std::get<1>(m.face_vertex_span(m.frac_faces[ffi]));

  out << "CELLS " << nc + nff << ' ' << list_len << '\n';
  for (int c = 0; c < nc; ++c) {
    const int b = m.cell_vert_offsets[c], e = m.cell_vert_offsets[c + 1];
    out << e - b;
    for (int k = b; k < e; ++k) out << ' ' << m.cell_verts[k];
    out << '\n';
  }
  for (int ffi = 0; ffi < nff; ++ffi) {
    auto [fv, nfv] = m.face_vertex_span(m.frac_faces[ffi]);
    out << nfv;
    for (int k = 0; k < nfv; ++k) out << ' ' << fv[k];
    out << '\n';
  }

  out << "CELL_TYPES " << nc + nff << '\n';
  for (int c = 0; c < nc; ++c)
    out << vtk_cell_type(m.cell_vert_offsets[c + 1] - m.cell_vert_offsets[c]) << '\n';
  for (int ffi = 0; ffi < nff; ++ffi)
    out << vtk_face_type(std::get<1>(m.face_vertex_span(m.frac_faces[ffi]))) << '\n';

  out << "CELL_DATA " << nc + nff << '\n';
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) {
    std::snprintf(buf, sizeof buf, "%.9g\n", u[c]);
    out << buf;
  }
  for (int ffi = 0; ffi < nff; ++ffi) {
    std::snprintf(buf, sizeof buf, "%.9g\n", u[s.fracture_face_dof(ffi)]);
    out << buf;
  }

  out << "SCALARS block int 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) out << 0 << '\n';
  for (int ffi = 0; ffi < nff; ++ffi) out << 1 + m.face_frac[m.frac_faces[ffi]] << '\n';

  out << "SCALARS jump double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) out << 0 << '\n';
  for (int ffi = 0; ffi < nff; ++ffi) {
    std::snprintf(buf, sizeof buf, "%.9g\n", jump_mag[ffi]);
    out << buf;
  }
}

void write_vtk_file(const Scheme& s, const Eigen::VectorXd& u, const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_vtk(s, u, out);
  if (!out) throw std::runtime_error("error writing " + path);
}

} // namespace dfm
