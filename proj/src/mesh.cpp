// Mesh generation: Cartesian hexahedra and their Kuhn simplicial subdivision,
// fracture tagging, vertex classes and shape-regularity reporting.

#include <dfm/mesh.hpp>
#include <dfm/quadrature.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace dfm
{

namespace
{

struct FaceKeyHash
{
  size_t operator()(const std::array<int, 4>& k) const
  {
    uint64_t h = 1469598103934665603ull;
    for (int v : k) {
      h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

int quadrant_of(const Vector3d& p)
{
  if (p.x() < 0.0) return p.y() > 0.0 ? 1 : 4;
  return p.y() > 0.0 ? 2 : 3;
}

// Shared topology finalization once cells (vertex lists + local face tables)
// are known. Local faces are given as cyclic vertex loops per cell.
struct Builder
{
  Mesh m;
  std::unordered_map<std::array<int, 4>, int, FaceKeyHash> face_ids;

  Builder() { m.face_vert_offsets.push_back(0); }

  void add_face(int cell, std::array<int, 4> loop, int nv)
  {
    std::array<int, 4> key = loop;
    if (nv == 3) key[3] = -1;
    std::sort(key.begin(), key.end());
    auto it = face_ids.find(key);
    if (it == face_ids.end()) {
      const int id = static_cast<int>(m.face_cells.size());
      face_ids.emplace(key, id);
      for (int i = 0; i < nv; ++i) m.face_verts.push_back(loop[i]);
      m.face_vert_offsets.push_back(static_cast<int>(m.face_verts.size()));
      m.face_cells.push_back({cell, -1});
      m.cell_faces.push_back(id);
    } else {
      if (m.face_cells[it->second][1] != -1) throw std::runtime_error("non-manifold face");
      m.face_cells[it->second][1] = cell;
      m.cell_faces.push_back(it->second);
    }
  }

  void finalize()
  {
    const int nc = m.n_cells();
    const int nf = static_cast<int>(m.face_cells.size());

    // Face geometry. Vertex barycenters coincide with area barycenters for
    // the rectangles and triangles produced here.
    m.face_center.resize(nf);
    m.face_area.resize(nf);
    m.face_normal.resize(nf);
    m.face_frac.assign(nf, -1);
    for (int f = 0; f < nf; ++f) {
      const auto [fv, nv] = m.face_vertex_span(f);
      Vector3d c = Vector3d::Zero();
      for (int i = 0; i < nv; ++i) c += m.points[fv[i]];
      c /= nv;
      m.face_center[f] = c;

      double area = 0.0;
      for (int i = 1; i + 1 < nv; ++i)
        area += tri_area(m.points[fv[0]], m.points[fv[i]], m.points[fv[i + 1]]);
      m.face_area[f] = area;

      Vector3d nrm = (m.points[fv[1]] - m.points[fv[0]]).cross(m.points[fv[2]] - m.points[fv[0]]);
      nrm.normalize();
      if (nrm.dot(c - m.cell_center[m.face_cells[f][0]]) < 0.0) nrm = -nrm;
      m.face_normal[f] = nrm;

      // Planarity guard (faces here are exactly planar by construction).
      for (int i = 0; i < nv; ++i)
        if (std::abs(nrm.dot(m.points[fv[i]] - c)) > 1e-10 * m.h)
          throw std::runtime_error("non-planar face");

      // Fracture tagging: interior faces inside either median plane.
      if (m.face_cells[f][1] >= 0) {
        bool on_x = true, on_y = true;
        for (int i = 0; i < nv; ++i) {
          on_x = on_x && std::abs(m.points[fv[i]].x()) <= geom_eps;
          on_y = on_y && std::abs(m.points[fv[i]].y()) <= geom_eps;
        }
        if (on_x) m.face_frac[f] = c.y() > 0.0 ? 0 : 2;
        if (on_y) m.face_frac[f] = c.x() > 0.0 ? 1 : 3;
      }
    }

    // Edges per face, deduplicated through sorted vertex pairs.
    std::unordered_map<uint64_t, int> edge_ids;
    m.face_edge_offsets.assign(1, 0);
    for (int f = 0; f < nf; ++f) {
      const auto [fv, nv] = m.face_vertex_span(f);
      for (int i = 0; i < nv; ++i) {
        int a = fv[i], b = fv[(i + 1) % nv];
        if (a > b) std::swap(a, b);
        const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
        auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(m.edge_verts.size()));
        if (inserted) m.edge_verts.push_back({a, b});
        m.face_edges.push_back(it->second);
      }
      m.face_edge_offsets.push_back(static_cast<int>(m.face_edges.size()));
    }

    // Boundary flags.
    m.vert_on_boundary.assign(m.n_verts(), 0);
    m.edge_on_boundary.assign(m.n_edges(), 0);
    for (int f = 0; f < nf; ++f) {
      if (m.face_cells[f][1] >= 0) continue;
      const auto [fv, nv] = m.face_vertex_span(f);
      for (int i = 0; i < nv; ++i) m.vert_on_boundary[fv[i]] = 1;
      for (int k = m.face_edge_offsets[f]; k < m.face_edge_offsets[f + 1]; ++k)
        m.edge_on_boundary[m.face_edges[k]] = 1;
    }

    // Fracture incidence and dense renumberings.
    m.vert_on_frac.assign(m.n_verts(), 0);
    m.edge_on_frac.assign(m.n_edges(), 0);
    m.face_frac_index.assign(nf, -1);
    for (int f = 0; f < nf; ++f) {
      if (m.face_frac[f] < 0) continue;
      m.face_frac_index[f] = static_cast<int>(m.frac_faces.size());
      m.frac_faces.push_back(f);
      const auto [fv, nv] = m.face_vertex_span(f);
      for (int i = 0; i < nv; ++i) m.vert_on_frac[fv[i]] = 1;
      for (int k = m.face_edge_offsets[f]; k < m.face_edge_offsets[f + 1]; ++k)
        m.edge_on_frac[m.face_edges[k]] = 1;
    }
    m.vert_frac_index.assign(m.n_verts(), -1);
    for (int v = 0; v < m.n_verts(); ++v)
      if (m.vert_on_frac[v]) {
        m.vert_frac_index[v] = static_cast<int>(m.frac_verts.size());
        m.frac_verts.push_back(v);
      }
    m.edge_frac_index.assign(m.n_edges(), -1);
    for (int e = 0; e < m.n_edges(); ++e)
      if (m.edge_on_frac[e]) {
        m.edge_frac_index[e] = static_cast<int>(m.frac_edges.size());
        m.frac_edges.push_back(e);
      }

    // Intersection-line entities.
    m.vert_on_sigma.assign(m.n_verts(), 0);
    for (int v = 0; v < m.n_verts(); ++v)
      m.vert_on_sigma[v] =
          std::abs(m.points[v].x()) <= geom_eps && std::abs(m.points[v].y()) <= geom_eps;
    m.edge_on_sigma.assign(m.n_edges(), 0);
    for (int e = 0; e < m.n_edges(); ++e)
      m.edge_on_sigma[e] = m.edge_on_frac[e] && m.vert_on_sigma[m.edge_verts[e][0]] &&
                           m.vert_on_sigma[m.edge_verts[e][1]];

    // Vertex -> cells adjacency.
    m.vert_cell_offsets.assign(m.n_verts() + 1, 0);
    for (int c = 0; c < nc; ++c)
      for (int k = m.cell_vert_offsets[c]; k < m.cell_vert_offsets[c + 1]; ++k)
        m.vert_cell_offsets[m.cell_verts[k] + 1]++;
    for (int v = 0; v < m.n_verts(); ++v) m.vert_cell_offsets[v + 1] += m.vert_cell_offsets[v];
    m.vert_cells.resize(m.cell_verts.size());
    std::vector<int> cursor(m.vert_cell_offsets.begin(), m.vert_cell_offsets.end() - 1);
    for (int c = 0; c < nc; ++c)
      for (int k = m.cell_vert_offsets[c]; k < m.cell_vert_offsets[c + 1]; ++k)
        m.vert_cells[cursor[m.cell_verts[k]]++] = c;
  }
};

} // namespace

Mesh build_cartesian_mesh(int n)
{
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("mesh subdivisions must be even and >= 2");

  Builder bld;
  Mesh& m = bld.m;
  m.kind = Mesh::Kind::hex;
  m.n = n;
  m.h = 1.0 / n;

  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };
  m.points.resize(static_cast<size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        m.points[vid(i, j, k)] =
            Vector3d((2.0 * i - n) / (2.0 * n), (2.0 * j - n) / (2.0 * n), (2.0 * k - n) / (2.0 * n));

  // Hexahedra with the usual bottom/top vertex loop ordering.
  m.cell_vert_offsets.push_back(0);
  m.cell_face_offsets.push_back(0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int v[8] = {vid(i, j, k),         vid(i + 1, j, k),         vid(i + 1, j + 1, k),
                          vid(i, j + 1, k),     vid(i, j, k + 1),         vid(i + 1, j, k + 1),
                          vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)};
        const int c = static_cast<int>(m.cell_center.size());
        for (int t = 0; t < 8; ++t) m.cell_verts.push_back(v[t]);
        m.cell_vert_offsets.push_back(static_cast<int>(m.cell_verts.size()));

        Vector3d ctr = Vector3d::Zero();
        for (int t = 0; t < 8; ++t) ctr += m.points[v[t]];
        ctr /= 8.0;
        m.cell_center.push_back(ctr);
        m.cell_volume.push_back(m.h * m.h * m.h);
        m.cell_subdomain.push_back(quadrant_of(ctr));

        static const int local_faces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                              {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
        for (const auto& lf : local_faces)
          bld.add_face(c, {v[lf[0]], v[lf[1]], v[lf[2]], v[lf[3]]}, 4);
        m.cell_face_offsets.push_back(static_cast<int>(m.cell_faces.size()));
      }

  bld.finalize();
  return m;
}

Mesh build_kuhn_mesh(int n)
{
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("mesh subdivisions must be even and >= 2");

  Builder bld;
  Mesh& m = bld.m;
  m.kind = Mesh::Kind::tet;
  m.n = n;
  m.h = 1.0 / n;

  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };
  m.points.resize(static_cast<size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        m.points[vid(i, j, k)] =
            Vector3d((2.0 * i - n) / (2.0 * n), (2.0 * j - n) / (2.0 * n), (2.0 * k - n) / (2.0 * n));

  // Six tetrahedra per grid cube: walk from the low corner to the high corner
  // adding unit steps in each axis permutation. The rule is identical in every
  // cube, so shared faces match across cube boundaries.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

  m.cell_vert_offsets.push_back(0);
  m.cell_face_offsets.push_back(0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& perm : perms) {
          int idx[3] = {i, j, k};
          int v[4];
          v[0] = vid(idx[0], idx[1], idx[2]);
          for (int s = 0; s < 3; ++s) {
            idx[perm[s]]++;
            v[s + 1] = vid(idx[0], idx[1], idx[2]);
          }

          const int c = static_cast<int>(m.cell_center.size());
          for (int t = 0; t < 4; ++t) m.cell_verts.push_back(v[t]);
          m.cell_vert_offsets.push_back(static_cast<int>(m.cell_verts.size()));

          const Vector3d a = m.points[v[0]], b = m.points[v[1]], cc = m.points[v[2]],
                         d = m.points[v[3]];
          m.cell_center.push_back((a + b + cc + d) / 4.0);
          m.cell_volume.push_back(tet_volume(a, b, cc, d));
          m.cell_subdomain.push_back(quadrant_of(m.cell_center.back()));

          static const int local_faces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
          for (const auto& lf : local_faces)
            bld.add_face(c, {v[lf[0]], v[lf[1]], v[lf[2]], -1}, 3);
          m.cell_face_offsets.push_back(static_cast<int>(m.cell_faces.size()));
        }

  bld.finalize();
  return m;
}

VertexClasses build_vertex_classes(const Mesh& m)
{
  VertexClasses vc;
  const int nv = m.n_verts();
  const int n_slots = static_cast<int>(m.vert_cells.size());

  // Union-find over the (vertex, adjacent cell) slots, local to each vertex.
  std::vector<int> parent(n_slots);
  for (int s = 0; s < n_slots; ++s) parent[s] = s;
  auto find = [&](int s) {
    while (parent[s] != s) {
      parent[s] = parent[parent[s]];
      s = parent[s];
    }
    return s;
  };

  auto slot_of = [&](int v, int c) {
    for (int k = m.vert_cell_offsets[v]; k < m.vert_cell_offsets[v + 1]; ++k)
      if (m.vert_cells[k] == c) return k;
    return -1;
  };

  // Two cells sharing a non-fracture face are one connected group at each
  // vertex of that face.
  for (int f = 0; f < m.n_faces(); ++f) {
    if (m.face_cells[f][1] < 0 || m.face_frac[f] >= 0) continue;
    const auto [fv, nvf] = m.face_vertex_span(f);
    for (int i = 0; i < nvf; ++i) {
      const int ra = find(slot_of(fv[i], m.face_cells[f][0]));
      const int rb = find(slot_of(fv[i], m.face_cells[f][1]));
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }

  // Number the classes deterministically in slot order.
  vc.vert_cell_class.assign(n_slots, -1);
  vc.vert_class_offsets.assign(nv + 1, 0);
  std::vector<int> root_class(n_slots, -1);
  for (int v = 0; v < nv; ++v) {
    vc.vert_class_offsets[v] = vc.n_classes();
    for (int k = m.vert_cell_offsets[v]; k < m.vert_cell_offsets[v + 1]; ++k) {
      const int r = find(k);
      if (root_class[r] < 0) {
        root_class[r] = vc.n_classes();
        vc.class_vertex.push_back(v);
        vc.class_subdomain.push_back(m.cell_subdomain[m.vert_cells[k]]);
      }
      vc.vert_cell_class[k] = root_class[r];
    }
  }
  vc.vert_class_offsets[nv] = vc.n_classes();

  vc.class_cell_offsets.assign(vc.n_classes() + 1, 0);
  for (int s = 0; s < n_slots; ++s) vc.class_cell_offsets[vc.vert_cell_class[s] + 1]++;
  for (int c = 0; c < vc.n_classes(); ++c) vc.class_cell_offsets[c + 1] += vc.class_cell_offsets[c];
  vc.class_cells.resize(n_slots);
  std::vector<int> cursor(vc.class_cell_offsets.begin(), vc.class_cell_offsets.end() - 1);
  for (int v = 0; v < nv; ++v)
    for (int k = m.vert_cell_offsets[v]; k < m.vert_cell_offsets[v + 1]; ++k)
      vc.class_cells[cursor[vc.vert_cell_class[k]]++] = m.vert_cells[k];

  return vc;
}

MeshQuality compute_quality(const Mesh& m)
{
  MeshQuality q;
  for (int c = 0; c < m.n_cells(); ++c) {
    const Vector3d xk = m.cell_center[c];
    for_each_subtet(m, c, [&](int f, int s0, int s1) {
      const Vector3d p[4] = {xk, m.face_center[f], m.points[s0], m.points[s1]};
      double diam = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) diam = std::max(diam, (p[a] - p[b]).norm());
      const double vol = tet_volume(p[0], p[1], p[2], p[3]);
      double surf = 0.0;
      for (int skip = 0; skip < 4; ++skip) {
        Vector3d t[3];
        int w = 0;
        for (int a = 0; a < 4; ++a)
          if (a != skip) t[w++] = p[a];
        surf += tri_area(t[0], t[1], t[2]);
      }
      const double insphere_diam = 6.0 * vol / surf;
      q.h_max = std::max(q.h_max, diam);
      q.theta_max = std::max(q.theta_max, diam / insphere_diam);
    });
  }
  return q;
}

} // namespace dfm
