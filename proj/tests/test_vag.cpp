// VAG scheme tests: dof counts, affine exactness, flux duality, coupling
// mass matrices, sources and pairings.

#include <dfm/vag.hpp>

#include <dfm/model.hpp>
#include <dfm/quadrature.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace dfm;

namespace
{

Eigen::VectorXd affine_dof_vector(const VagScheme& s, const Vector3d& g, double off)
{
  const DofLayout& lay = s.layout();
  Eigen::VectorXd u(lay.n_total);
  for (int i = 0; i < lay.n_total; ++i) u[i] = g.dot(lay.position[i]) + off;
  return u;
}

} // namespace

TEST_CASE("vag dof counts on cartesian meshes", "[vag]")
{
  const Case cs = isotropic_case();

  const Mesh m2 = build_cartesian_mesh(2);
  const VagScheme s2(m2, cs, VagMode::fe);
  REQUIRE(s2.layout().n_cells == 8);
  REQUIRE(s2.layout().n_matrix == 72);           // 8 cells + 16 traces + 48 classes
  REQUIRE(s2.layout().n_total - s2.layout().n_matrix == 23);  // 8 faces + 15 vertices
  REQUIRE(s2.layout().n_total == 95);

  const Mesh m8 = build_cartesian_mesh(8);
  const VagScheme s8(m8, cs, VagMode::fe);
  REQUIRE(s8.layout().n_cells == 512);
  REQUIRE(s8.layout().n_matrix == 512 + 256 + 900);
  REQUIRE(s8.layout().n_total == 1949);
}

TEST_CASE("vag dirichlet dofs sit on the boundary", "[vag]")
{
  const Mesh m = build_cartesian_mesh(4);
  const VagScheme s(m, isotropic_case(), VagMode::fe);
  const DofLayout& lay = s.layout();
  int ndir = 0;
  for (int i = 0; i < lay.n_total; ++i) {
    if (!lay.dirichlet[i]) continue;
    ++ndir;
    const Vector3d& x = lay.position[i];
    REQUIRE(x.cwiseAbs().maxCoeff() == Catch::Approx(0.5).margin(1e-14));
    REQUIRE(i >= lay.n_cells);  // never a cell or interior dof
  }
  // Boundary vertex classes plus boundary fracture vertices.
  int nbc = 0;
  const VertexClasses& vc = s.classes();
  for (int cid = 0; cid < vc.n_classes(); ++cid)
    if (m.vert_on_boundary[vc.class_vertex[cid]]) ++nbc;
  int nbf = 0;
  for (const int v : m.frac_verts)
    if (m.vert_on_boundary[v]) ++nbf;
  REQUIRE(ndir == nbc + nbf);
}

TEST_CASE("vag gradients are exact on affine functions", "[vag]")
{
  const Case cs = isotropic_case();
  for (const bool kuhn : {false, true}) {
    const Mesh m = kuhn ? build_kuhn_mesh(2) : build_cartesian_mesh(4);
    const VagScheme s(m, cs, VagMode::fe);
    const Vector3d g(0.7, -1.3, 2.1);
    const Eigen::VectorXd u = affine_dof_vector(s, g, 0.4);
    for (int c = 0; c < m.n_cells(); ++c)
      REQUIRE((s.cell_gradient(c, u) - g).norm() < 1e-13);
    // In-plane fracture gradients reproduce the tangential part.
    for (int ffi = 0; ffi < static_cast<int>(m.frac_faces.size()); ++ffi) {
      const int f = m.frac_faces[ffi];
      const Vector3d n = m.face_normal[f];
      const Vector3d gt = g - g.dot(n) * n;
      REQUIRE((s.fracture_gradient(ffi, u) - gt).norm() < 1e-13);
    }
  }
}

TEST_CASE("vag cell energy of affine functions matches K grad u . grad v", "[vag]")
{
  const Case cs = anisotropic_case();
  const Mesh m = build_cartesian_mesh(2);
  const VagScheme s(m, cs, VagMode::fe);
  const Vector3d gu(0.3, 1.1, -0.5), gv(-1.0, 0.2, 0.9);
  const Eigen::VectorXd u = affine_dof_vector(s, gu, 0.1);
  const Eigen::VectorXd v = affine_dof_vector(s, gv, -2.0);
  int c = 0;
  s.for_each_cell_block([&](const LocalBlock& blk) {
    Eigen::VectorXd ul(blk.dofs.size()), vl(blk.dofs.size());
    for (size_t i = 0; i < blk.dofs.size(); ++i) {
      ul[i] = u[blk.dofs[i]];
      vl[i] = v[blk.dofs[i]];
    }
    const Vector3d Kd = cs.K[m.cell_subdomain[c] - 1];
    const double expect = m.cell_volume[c] * Kd.cwiseProduct(gu).dot(gv);
    REQUIRE(vl.dot(blk.A * ul) == Catch::Approx(expect).margin(1e-13));
    ++c;
  });
  REQUIRE(c == m.n_cells());
}

TEST_CASE("vag fracture energy of in-plane affine functions", "[vag]")
{
  const Case cs = isotropic_case();
  const Mesh m = build_cartesian_mesh(2);
  const VagScheme s(m, cs, VagMode::fe);
  const Vector3d g(0.4, -0.8, 1.5);
  const Eigen::VectorXd u = affine_dof_vector(s, g, 0.0);
  int ffi = 0;
  s.for_each_fracture_block([&](const LocalBlock& blk) {
    const int f = m.frac_faces[ffi];
    const Vector3d n = m.face_normal[f];
    const Vector3d gt = g - g.dot(n) * n;
    Eigen::VectorXd ul(blk.dofs.size());
    for (size_t i = 0; i < blk.dofs.size(); ++i) ul[i] = u[blk.dofs[i]];
    const double w = cs.d_f * cs.Kf[m.face_frac[f]];
    const double expect = w * m.face_area[f] * gt.squaredNorm();
    REQUIRE(ul.dot(blk.A * ul) == Catch::Approx(expect).margin(1e-13));
    ++ffi;
  });
}

TEST_CASE("vag blocks kill constants and have zero row sums", "[vag]")
{
  const Mesh m = build_cartesian_mesh(2);
  const VagScheme s(m, anisotropic_case(), VagMode::fe);
  auto check = [](const LocalBlock& blk) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(blk.dofs.size());
    REQUIRE((blk.A * ones).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((blk.A - blk.A.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  };
  s.for_each_cell_block(check);
  s.for_each_fracture_block(check);
}

TEST_CASE("vag flux duality against the bilinear form", "[vag]")
{
  // Fluxes F_{K nu}(u) = -(A_K u)_nu satisfy
  //   sum_nu F_{K nu}(u) (v_K - v_nu) = v^T A_K u.
  const Mesh m = build_cartesian_mesh(2);
  const VagScheme s(m, anisotropic_case(), VagMode::fe);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd u(s.layout().n_total), v(s.layout().n_total);
    for (int i = 0; i < s.layout().n_total; ++i) {
      u[i] = dist(rng);
      v[i] = dist(rng);
    }
    double lhs = 0.0, rhs = 0.0;
    s.for_each_cell_block([&](const LocalBlock& blk) {
      const int n = static_cast<int>(blk.dofs.size());
      Eigen::VectorXd ul(n), vl(n);
      for (int i = 0; i < n; ++i) {
        ul[i] = u[blk.dofs[i]];
        vl[i] = v[blk.dofs[i]];
      }
      const Eigen::VectorXd flux = -(blk.A * ul);
      for (int i = 1; i < n; ++i) lhs += flux[i] * (vl[0] - vl[i]);
      rhs += vl.dot(blk.A * ul);
    });
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12 * std::max(1.0, std::abs(rhs))));
  }
}

TEST_CASE("vag coupling mass matrices", "[vag]")
{
  const Case cs = isotropic_case();
  const Mesh m = build_cartesian_mesh(2);

  SECTION("fe variant: symmetric, total mass Tf |face|")
  {
    const VagScheme s(m, cs, VagMode::fe);
    s.for_each_mf_block([&](const MfBlock& mb) {
      const double Tf = cs.T[m.face_frac[mb.face]];
      const double A = m.face_area[mb.face];
      REQUIRE((mb.mass - mb.mass.transpose()).cwiseAbs().maxCoeff() < 1e-14);
      REQUIRE(mb.mass.sum() == Catch::Approx(Tf * A).epsilon(1e-13));
      // Row sums integrate the basis functions.
      const Eigen::VectorXd rows = mb.mass.rowwise().sum();
      REQUIRE(rows[0] == Catch::Approx(Tf * A / 3.0).epsilon(1e-13));  // face-center hat
      for (int k = 1; k < rows.size(); ++k)
        REQUIRE(rows[k] == Catch::Approx(Tf * A / 6.0).epsilon(1e-13));
    });
  }

  SECTION("cv variant: diagonal thirds")
  {
    const VagScheme s(m, cs, VagMode::cv);
    s.for_each_mf_block([&](const MfBlock& mb) {
      const double Tf = cs.T[m.face_frac[mb.face]];
      const double A = m.face_area[mb.face];
      for (int i = 0; i < mb.mass.rows(); ++i)
        for (int j = 0; j < mb.mass.cols(); ++j)
          if (i != j) REQUIRE(mb.mass(i, j) == 0.0);
      REQUIRE(mb.mass(0, 0) == Catch::Approx(Tf * A / 3.0).epsilon(1e-13));
      for (int k = 1; k < mb.mass.rows(); ++k)
        REQUIRE(mb.mass(k, k) == Catch::Approx(Tf * A / 6.0).epsilon(1e-13));
    });
  }

  SECTION("assembled coupling block is positive semidefinite for xi = 1")
  {
    const VagScheme s(m, cs, VagMode::fe);
    const double xi = 1.0;
    s.for_each_mf_block([&](const MfBlock& mb) {
      const int n = static_cast<int>(mb.frac_dofs.size());
      Eigen::MatrixXd B(3 * n, 3 * n);
      const Eigen::MatrixXd& M = mb.mass;
      B.block(0, 0, n, n) = xi * M;
      B.block(0, n, n, n) = (1.0 - xi) * M;
      B.block(n, 0, n, n) = (1.0 - xi) * M;
      B.block(n, n, n, n) = xi * M;
      B.block(0, 2 * n, n, n) = -M;
      B.block(n, 2 * n, n, n) = -M;
      B.block(2 * n, 0, n, n) = -M;
      B.block(2 * n, n, n, n) = -M;
      B.block(2 * n, 2 * n, n, n) = 2.0 * M;
      B /= 2.0 * xi - 1.0;
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
      REQUIRE(es.eigenvalues().minCoeff() > -1e-12);
    });
  }

  SECTION("side 0 classes belong to the negative side subdomain")
  {
    const VagScheme s(m, cs, VagMode::fe);
    const VertexClasses& vc = s.classes();
    const int n_cells = s.layout().n_cells;
    const int nff = static_cast<int>(m.frac_faces.size());
    s.for_each_mf_block([&](const MfBlock& mb) {
      const int g = m.face_frac[mb.face];
      for (int side = 0; side < 2; ++side) {
        REQUIRE(mb.side_dofs[side][0] == s.trace_dof(m.face_frac_index[mb.face], side));
        for (size_t k = 1; k < mb.side_dofs[side].size(); ++k) {
          const int cid = mb.side_dofs[side][k] - (n_cells + 2 * nff);
          REQUIRE(vc.class_subdomain[cid] == frac_side_subdomain(g, side));
        }
      }
    });
  }
}

TEST_CASE("vag sources sum to the integrated right hand side", "[vag]")
{
  const Case cs = isotropic_case();
  const Mesh m = build_cartesian_mesh(4);

  // Independent totals by direct quadrature over the submesh.
  double total_m = 0.0;
  for (int c = 0; c < m.n_cells(); ++c)
    for_each_subtet(m, c, [&](int f, int s0, int s1) {
      total_m += integrate_tet(m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1],
                               [&](const Vector3d& x, const Eigen::Vector4d&) {
                                 return matrix_source(cs, m.cell_subdomain[c], x);
                               });
    });
  double total_f = 0.0;
  for (const int f : m.frac_faces)
    for_each_subtri(m, f, [&](int s0, int s1) {
      total_f += cs.d_f * integrate_tri(m.face_center[f], m.points[s0], m.points[s1],
                                        [&](const Vector3d& x, const Vector3d&) {
                                          return fracture_source(cs, m.face_frac[f], x);
                                        });
    });

  for (const VagMode mode : {VagMode::fe, VagMode::cv}) {
    const VagScheme s(m, cs, mode);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.layout().n_total);
    s.add_sources(rhs);
    const double total = total_m + total_f;
    REQUIRE(rhs.sum() == Catch::Approx(total).epsilon(1e-12));
    // Matrix and fracture parts balance separately.
    REQUIRE(rhs.head(s.layout().n_matrix).sum() == Catch::Approx(total_m).epsilon(1e-12));
  }
}

TEST_CASE("vag face pairing weights", "[vag]")
{
  const Case cs = isotropic_case();
  const Mesh m = build_cartesian_mesh(2);
  auto r_affine = [](const Vector3d& x) { return 0.3 + 1.7 * x[1] - 0.9 * x[2]; };

  for (const VagMode mode : {VagMode::fe, VagMode::cv}) {
    const VagScheme s(m, cs, mode);
    s.for_each_mf_block([&](const MfBlock& mb) {
      const Eigen::VectorXd w1 = s.face_pairing(mb.face, [](const Vector3d&) { return 1.0; });
      REQUIRE(w1.size() == static_cast<int>(mb.frac_dofs.size()));
      REQUIRE(w1.sum() == Catch::Approx(m.face_area[mb.face]).epsilon(1e-13));
      if (mode == VagMode::cv) {
        // Thirds partition: center gets a third, corners share the rest.
        REQUIRE(w1[0] == Catch::Approx(m.face_area[mb.face] / 3.0).epsilon(1e-13));
      }
      double ex = 0.0;
      for_each_subtri(m, mb.face, [&](int s0, int s1) {
        ex += integrate_tri(m.face_center[mb.face], m.points[s0], m.points[s1],
                            [&](const Vector3d& x, const Vector3d&) { return r_affine(x); });
      });
      const Eigen::VectorXd wr = s.face_pairing(mb.face, r_affine);
      REQUIRE(wr.sum() == Catch::Approx(ex).epsilon(1e-12));
    });
  }
}

TEST_CASE("vag sigma line source distributes the outflow", "[vag]")
{
  const Case cs = isotropic_case();
  const Mesh m = build_cartesian_mesh(4);
  for (const VagMode mode : {VagMode::fe, VagMode::cv}) {
    const VagScheme s(m, cs, mode);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.layout().n_total);
    s.add_sigma_source([](const Vector3d&) { return 1.0; }, rhs);
    // The intersection line has unit length; rhs picks up minus the integral.
    REQUIRE(rhs.sum() == Catch::Approx(-1.0).epsilon(1e-13));
    for (int i = 0; i < s.layout().n_total; ++i) {
      if (rhs[i] == 0.0) continue;
      const Vector3d& x = s.layout().position[i];
      REQUIRE(std::abs(x[0]) < 1e-14);
      REQUIRE(std::abs(x[1]) < 1e-14);
      REQUIRE(i >= s.layout().n_matrix);
    }
  }
}

TEST_CASE("vag exact dof values agree with the closed-form solution", "[vag]")
{
  const Case cs = isotropic_case();
  const Mesh m = build_cartesian_mesh(2);
  const VagScheme s(m, cs, VagMode::fe);
  const Eigen::VectorXd u = s.exact_dof_values();
  for (int c = 0; c < m.n_cells(); ++c)
    REQUIRE(u[c] == matrix_value(cs, m.cell_subdomain[c], m.cell_center[c]));
  // On the intersection line all four wings agree, so the vertex values are
  // wing independent.
  for (int vfi = 0; vfi < static_cast<int>(m.frac_verts.size()); ++vfi) {
    const int v = m.frac_verts[vfi];
    if (!m.vert_on_sigma[v]) continue;
    const int dof = s.layout().n_matrix + static_cast<int>(m.frac_faces.size()) + vfi;
    for (int g = 0; g < 4; ++g)
      REQUIRE(u[dof] == Catch::Approx(fracture_value(cs, g, m.points[v])).epsilon(1e-13));
  }
}
