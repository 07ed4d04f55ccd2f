// Mesh construction checks: entity counts on the refinement family, fracture
// and intersection tagging, vertex classes against a brute-force partition,
// and geometric consistency of faces and sub-simplices.

#include <dfm/mesh.hpp>
#include <dfm/quadrature.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <set>

using namespace dfm;

namespace
{

struct HexCounts
{
  int n;
  int cells, verts, faces, edges;
  int frac_faces, frac_verts, frac_edges, classes;
};

// Closed-form entity counts for the Cartesian grid on the unit cube with the
// two median planes acting as interfaces. Classes split fracture vertices per
// side and intersection-line vertices per quadrant.
HexCounts expected_hex_counts(int n)
{
  const int np = n + 1;
  HexCounts e;
  e.n = n;
  e.cells = n * n * n;
  e.verts = np * np * np;
  e.faces = 3 * n * n * np;
  e.edges = 3 * n * np * np;
  e.frac_faces = 2 * n * n;
  e.frac_verts = 2 * np * np - np;
  e.frac_edges = 4 * n * np - n;
  e.classes = (np * np * np - 2 * np * np + np) + 2 * (2 * n * np) + 4 * np;
  return e;
}

// Independent connectivity check: around one vertex, group adjacent cells by
// paths through shared non-interface faces.
std::vector<int> brute_force_components(const Mesh& m, int v)
{
  std::vector<int> cells(m.vert_cells.begin() + m.vert_cell_offsets[v],
                         m.vert_cells.begin() + m.vert_cell_offsets[v + 1]);
  const int nc = static_cast<int>(cells.size());
  std::vector<int> comp(nc, -1);
  auto local = [&](int cell) {
    for (int i = 0; i < nc; ++i)
      if (cells[i] == cell) return i;
    return -1;
  };

  int next = 0;
  for (int seed = 0; seed < nc; ++seed) {
    if (comp[seed] >= 0) continue;
    comp[seed] = next;
    std::vector<int> stack = {seed};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int f = 0; f < m.n_faces(); ++f) {
        if (m.face_cells[f][1] < 0 || m.face_frac[f] >= 0) continue;
        if (m.face_cells[f][0] != cells[a] && m.face_cells[f][1] != cells[a]) continue;
        const auto [fv, nvf] = m.face_vertex_span(f);
        bool touches = false;
        for (int i = 0; i < nvf; ++i) touches = touches || fv[i] == v;
        if (!touches) continue;
        const int other = m.face_cells[f][0] == cells[a] ? m.face_cells[f][1] : m.face_cells[f][0];
        const int b = local(other);
        if (comp[b] < 0) {
          comp[b] = comp[a];
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  return comp;
}

} // namespace

TEST_CASE("cartesian mesh entity counts match closed forms", "[mesh]")
{
  for (int n : {2, 4, 8, 16, 32}) {
    const Mesh m = build_cartesian_mesh(n);
    const HexCounts e = expected_hex_counts(n);
    INFO("n = " << n);
    CHECK(m.n_cells() == e.cells);
    CHECK(m.n_verts() == e.verts);
    CHECK(m.n_faces() == e.faces);
    CHECK(m.n_edges() == e.edges);
    CHECK(static_cast<int>(m.frac_faces.size()) == e.frac_faces);
    CHECK(static_cast<int>(m.frac_verts.size()) == e.frac_verts);
    CHECK(static_cast<int>(m.frac_edges.size()) == e.frac_edges);
    CHECK(build_vertex_classes(m).n_classes() == e.classes);
  }
}

TEST_CASE("frozen refinement-family counts", "[mesh]")
{
  // cells, fracture faces, classes, fracture verts, fracture edges, faces
  const int expected[3][6] = {{512, 128, 900, 153, 280, 1728},
                              {4096, 512, 5508, 561, 1072, 13056},
                              {32768, 2048, 38148, 2145, 4192, 101376}};
  const int ns[3] = {8, 16, 32};
  for (int l = 0; l < 3; ++l) {
    const Mesh m = build_cartesian_mesh(ns[l]);
    INFO("n = " << ns[l]);
    CHECK(m.n_cells() == expected[l][0]);
    CHECK(static_cast<int>(m.frac_faces.size()) == expected[l][1]);
    CHECK(build_vertex_classes(m).n_classes() == expected[l][2]);
    CHECK(static_cast<int>(m.frac_verts.size()) == expected[l][3]);
    CHECK(static_cast<int>(m.frac_edges.size()) == expected[l][4]);
    CHECK(m.n_faces() == expected[l][5]);
  }
}

TEST_CASE("tetrahedral mesh basic counts and conformity", "[mesh]")
{
  for (int n : {2, 4}) {
    const Mesh m = build_kuhn_mesh(n);
    INFO("n = " << n);
    CHECK(m.n_cells() == 6 * n * n * n);
    CHECK(m.n_verts() == (n + 1) * (n + 1) * (n + 1));
    CHECK(static_cast<int>(m.frac_faces.size()) == 4 * n * n);

    int boundary_faces = 0;
    for (int f = 0; f < m.n_faces(); ++f) {
      if (m.face_cells[f][1] < 0) {
        ++boundary_faces;
        // boundary faces must lie in a cube side
        const Vector3d c = m.face_center[f];
        const double d = std::max({std::abs(std::abs(c.x()) - 0.5), std::abs(std::abs(c.y()) - 0.5),
                                   std::abs(std::abs(c.z()) - 0.5)});
        const double closest = std::min({std::abs(std::abs(c.x()) - 0.5),
                                         std::abs(std::abs(c.y()) - 0.5),
                                         std::abs(std::abs(c.z()) - 0.5)});
        (void)d;
        CHECK(closest <= geom_eps);
      }
    }
    CHECK(boundary_faces == 12 * n * n);

    for (int c = 0; c < m.n_cells(); ++c)
      CHECK(m.cell_volume[c] == Catch::Approx(m.h * m.h * m.h / 6.0).epsilon(1e-13));
  }
}

TEST_CASE("fracture tagging and quadrant assignment", "[mesh]")
{
  for (Mesh::Kind kind : {Mesh::Kind::hex, Mesh::Kind::tet}) {
    const int n = 4;
    const Mesh m = kind == Mesh::Kind::hex ? build_cartesian_mesh(n) : build_kuhn_mesh(n);

    int per_frac[4] = {0, 0, 0, 0};
    for (int f : m.frac_faces) {
      per_frac[m.face_frac[f]]++;
      const Vector3d c = m.face_center[f];
      switch (m.face_frac[f]) {
      case 0: CHECK((std::abs(c.x()) <= geom_eps && c.y() > 0)); break;
      case 1: CHECK((std::abs(c.y()) <= geom_eps && c.x() > 0)); break;
      case 2: CHECK((std::abs(c.x()) <= geom_eps && c.y() < 0)); break;
      case 3: CHECK((std::abs(c.y()) <= geom_eps && c.x() < 0)); break;
      }
      // the two neighbours straddle the plane
      const int c0 = m.face_cells[f][0], c1 = m.face_cells[f][1];
      REQUIRE(c1 >= 0);
      const int axis = (m.face_frac[f] == 0 || m.face_frac[f] == 2) ? 0 : 1;
      CHECK(m.cell_center[c0][axis] * m.cell_center[c1][axis] < 0.0);
    }
    const int quads = kind == Mesh::Kind::hex ? n * n / 2 : n * n;
    for (int g = 0; g < 4; ++g) CHECK(per_frac[g] == quads);

    for (int c = 0; c < m.n_cells(); ++c) {
      const Vector3d& x = m.cell_center[c];
      const int expected = x.x() < 0 ? (x.y() > 0 ? 1 : 4) : (x.y() > 0 ? 2 : 3);
      CHECK(m.cell_subdomain[c] == expected);
    }

    // intersection line: grid points and grid edges on x = y = 0
    int sv = 0, se = 0;
    for (int v = 0; v < m.n_verts(); ++v) sv += m.vert_on_sigma[v];
    for (int e = 0; e < m.n_edges(); ++e) se += m.edge_on_sigma[e];
    CHECK(sv == n + 1);
    CHECK(se == n);
  }
}

TEST_CASE("vertex classes match brute-force connectivity", "[mesh]")
{
  for (Mesh::Kind kind : {Mesh::Kind::hex, Mesh::Kind::tet}) {
    const int n = kind == Mesh::Kind::hex ? 4 : 2;
    const Mesh m = kind == Mesh::Kind::hex ? build_cartesian_mesh(n) : build_kuhn_mesh(n);
    const VertexClasses vc = build_vertex_classes(m);

    for (int v = 0; v < m.n_verts(); ++v) {
      const std::vector<int> comp = brute_force_components(m, v);
      const int base = m.vert_cell_offsets[v];
      const int cnt = m.vert_cell_offsets[v + 1] - base;
      for (int a = 0; a < cnt; ++a)
        for (int b = a + 1; b < cnt; ++b) {
          const bool same_class = vc.vert_cell_class[base + a] == vc.vert_cell_class[base + b];
          CHECK(same_class == (comp[a] == comp[b]));
        }
      // classes of v form a contiguous range
      for (int a = 0; a < cnt; ++a) {
        const int cl = vc.vert_cell_class[base + a];
        CHECK(cl >= vc.vert_class_offsets[v]);
        CHECK(cl < vc.vert_class_offsets[v + 1]);
        CHECK(vc.class_vertex[cl] == v);
      }
    }

    // every member cell of a class lies in the class subdomain
    for (int cl = 0; cl < vc.n_classes(); ++cl)
      for (int k = vc.class_cell_offsets[cl]; k < vc.class_cell_offsets[cl + 1]; ++k)
        CHECK(m.cell_subdomain[vc.class_cells[k]] == vc.class_subdomain[cl]);

    // class lookup agrees with the slot table
    for (int v = 0; v < m.n_verts(); ++v)
      for (int k = m.vert_cell_offsets[v]; k < m.vert_cell_offsets[v + 1]; ++k)
        CHECK(vc.class_of(m, v, m.vert_cells[k]) == vc.vert_cell_class[k]);

    // interior vertices: one class off the planes, two per fracture side,
    // four around the intersection line
    for (int v = 0; v < m.n_verts(); ++v) {
      if (m.vert_on_boundary[v]) continue;
      const int n_cl = vc.vert_class_offsets[v + 1] - vc.vert_class_offsets[v];
      if (m.vert_on_sigma[v])
        CHECK(n_cl == 4);
      else if (m.vert_on_frac[v])
        CHECK(n_cl == 2);
      else
        CHECK(n_cl == 1);
    }
  }
}

TEST_CASE("face geometry and orientation", "[mesh]")
{
  for (Mesh::Kind kind : {Mesh::Kind::hex, Mesh::Kind::tet}) {
    const int n = 2;
    const Mesh m = kind == Mesh::Kind::hex ? build_cartesian_mesh(n) : build_kuhn_mesh(n);

    for (int c = 0; c < m.n_cells(); ++c) {
      Vector3d flux_sum = Vector3d::Zero();
      double div_vol = 0.0;
      for (int k = m.cell_face_offsets[c]; k < m.cell_face_offsets[c + 1]; ++k) {
        const int f = m.cell_faces[k];
        const Vector3d nout = m.outward_normal(f, c);
        CHECK(nout.dot(m.face_center[f] - m.cell_center[c]) > 0.0);
        flux_sum += m.face_area[f] * nout;
        div_vol += m.face_area[f] * nout.dot(m.face_center[f] - m.cell_center[c]) / 3.0;
      }
      CHECK(flux_sum.norm() < 1e-13);
      CHECK(div_vol == Catch::Approx(m.cell_volume[c]).epsilon(1e-12));
    }

    // face centers are the vertex means and faces are planar
    for (int f = 0; f < m.n_faces(); ++f) {
      const auto [fv, nvf] = m.face_vertex_span(f);
      Vector3d c = Vector3d::Zero();
      for (int i = 0; i < nvf; ++i) c += m.points[fv[i]];
      c /= nvf;
      CHECK((c - m.face_center[f]).norm() < 1e-14);
      for (int i = 0; i < nvf; ++i)
        CHECK(std::abs(m.face_normal[f].dot(m.points[fv[i]] - c)) < 1e-13);
    }

    // face edge loops line up with the vertex loops
    for (int f = 0; f < m.n_faces(); ++f) {
      const auto [fv, nvf] = m.face_vertex_span(f);
      for (int i = 0; i < nvf; ++i) {
        const int e = m.face_edges[m.face_edge_offsets[f] + i];
        const std::set<int> want = {fv[i], fv[(i + 1) % nvf]};
        const std::set<int> got = {m.edge_verts[e][0], m.edge_verts[e][1]};
        CHECK(want == got);
      }
    }
  }
}

TEST_CASE("sub-simplices partition cells and fracture faces", "[mesh]")
{
  for (Mesh::Kind kind : {Mesh::Kind::hex, Mesh::Kind::tet}) {
    const int n = 2;
    const Mesh m = kind == Mesh::Kind::hex ? build_cartesian_mesh(n) : build_kuhn_mesh(n);

    for (int c = 0; c < m.n_cells(); ++c) {
      double vol = 0.0;
      for_each_subtet(m, c, [&](int f, int s0, int s1) {
        const double v =
            tet_volume(m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1]);
        CHECK(v > 0.0);
        vol += v;
      });
      CHECK(vol == Catch::Approx(m.cell_volume[c]).epsilon(1e-12));
    }

    for (int f : m.frac_faces) {
      double area = 0.0;
      for_each_subtri(m, f, [&](int s0, int s1) {
        area += tri_area(m.face_center[f], m.points[s0], m.points[s1]);
      });
      CHECK(area == Catch::Approx(m.face_area[f]).epsilon(1e-12));
    }
  }
}

TEST_CASE("vertex-cell adjacency is consistent", "[mesh]")
{
  const Mesh m = build_kuhn_mesh(2);
  for (int v = 0; v < m.n_verts(); ++v) {
    std::set<int> expected;
    for (int c = 0; c < m.n_cells(); ++c)
      for (int k = m.cell_vert_offsets[c]; k < m.cell_vert_offsets[c + 1]; ++k)
        if (m.cell_verts[k] == v) expected.insert(c);
    const std::set<int> got(m.vert_cells.begin() + m.vert_cell_offsets[v],
                            m.vert_cells.begin() + m.vert_cell_offsets[v + 1]);
    CHECK(got == expected);
  }
}

TEST_CASE("midplane coordinates are exact and quality is scale invariant", "[mesh]")
{
  const Mesh m = build_cartesian_mesh(4);
  int on_plane = 0;
  for (const Vector3d& p : m.points)
    if (p.x() == 0.0) ++on_plane;
  CHECK(on_plane == 25);

  const MeshQuality q2 = compute_quality(build_kuhn_mesh(2));
  const MeshQuality q4 = compute_quality(build_kuhn_mesh(4));
  CHECK(q2.theta_max == Catch::Approx(q4.theta_max).epsilon(1e-12));
  CHECK(q2.h_max == Catch::Approx(2.0 * q4.h_max).epsilon(1e-12));
  // longest sub-tetrahedron edge is the main diagonal of a grid cube
  CHECK(q2.h_max == Catch::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-12));
}
