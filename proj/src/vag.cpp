// Vertex Approximate Gradient scheme: P1 gradients on the tetrahedral
// submesh (cell center, face center, two vertices), fe/cv reconstructions,
// and the matrix-fracture coupling mass matrices.

#include <dfm/vag.hpp>

#include <dfm/quadrature.hpp>

#include <cassert>

namespace dfm
{

namespace
{

// P1 basis gradients on a tetrahedron.
void tet_gradients(const Vector3d p[4], Vector3d g[4])
{
  Eigen::Matrix3d M;
  M.col(0) = p[1] - p[0];
  M.col(1) = p[2] - p[0];
  M.col(2) = p[3] - p[0];
  const Eigen::Matrix3d Mi = M.inverse();
  for (int i = 0; i < 3; ++i) g[i + 1] = Mi.row(i).transpose();
  g[0] = -(g[1] + g[2] + g[3]);
}

// P1 basis gradients on a triangle, as 3D vectors in the triangle plane.
void tri_gradients(const Vector3d q[3], Vector3d g[3])
{
  const Vector3d e1 = q[1] - q[0], e2 = q[2] - q[0];
  Eigen::Matrix2d G;
  G << e1.dot(e1), e1.dot(e2), e2.dot(e1), e2.dot(e2);
  const Eigen::Matrix2d Gi = G.inverse();
  g[1] = Gi(0, 0) * e1 + Gi(0, 1) * e2;
  g[2] = Gi(1, 0) * e1 + Gi(1, 1) * e2;
  g[0] = -(g[1] + g[2]);
}

// Corner region of node k in the thirds partition of a triangle: the
// quadrilateral (corner, edge midpoint, barycenter, other midpoint),
// returned as two triangles. Each region has one third of the area.
struct Kite
{
  Vector3d t1[3];
  Vector3d t2[3];
};

Kite corner_kite(const Vector3d q[3], int k)
{
  const Vector3d bc = (q[0] + q[1] + q[2]) / 3.0;
  const Vector3d ma = 0.5 * (q[k] + q[(k + 1) % 3]);
  const Vector3d mb = 0.5 * (q[k] + q[(k + 2) % 3]);
  return {{q[k], ma, bc}, {q[k], bc, mb}};
}

} // namespace

VagScheme::VagScheme(const Mesh& m, const Case& cs, VagMode mode)
    : m_(&m), case_(cs), mode_(mode)
{
  classes_ = build_vertex_classes(m);
  n_frac_faces_ = static_cast<int>(m.frac_faces.size());
  const int nc = m.n_cells();
  const int nfv = static_cast<int>(m.frac_verts.size());

  layout_.n_cells = nc;
  layout_.n_matrix = nc + 2 * n_frac_faces_ + classes_.n_classes();
  layout_.n_total = layout_.n_matrix + n_frac_faces_ + nfv;
  layout_.dirichlet.assign(layout_.n_total, 0);
  layout_.position.resize(layout_.n_total);

  for (int c = 0; c < nc; ++c) layout_.position[c] = m.cell_center[c];
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const Vector3d& x = m.face_center[m.frac_faces[ffi]];
    layout_.position[trace_dof(ffi, 0)] = x;
    layout_.position[trace_dof(ffi, 1)] = x;
    layout_.position[fracture_face_dof(ffi)] = x;
  }
  for (int cid = 0; cid < classes_.n_classes(); ++cid) {
    const int s = classes_.class_vertex[cid];
    layout_.position[class_dof(cid)] = m.points[s];
    layout_.dirichlet[class_dof(cid)] = m.vert_on_boundary[s];
  }
  vert_wing_.assign(nfv, 0);
  for (int vfi = 0; vfi < nfv; ++vfi) {
    const int s = m.frac_verts[vfi];
    layout_.position[vertex_dof(vfi)] = m.points[s];
    layout_.dirichlet[vertex_dof(vfi)] = m.vert_on_boundary[s];
  }
  for (const int f : m.frac_faces) {
    auto [fv, n] = m.face_vertex_span(f);
    for (int k = 0; k < n; ++k) vert_wing_[m.vert_frac_index[fv[k]]] = m.face_frac[f];
  }
}

int VagScheme::side_of(int f, int c) const
{
  const int axis = frac_normal_axis(m_->face_frac[f]);
  return m_->cell_center[c][axis] < 0.0 ? 0 : 1;
}

VagScheme::CellCtx VagScheme::cell_ctx(int c) const
{
  const Mesh& m = *m_;
  CellCtx ctx;
  const int v0 = m.cell_vert_offsets[c], v1 = m.cell_vert_offsets[c + 1];
  ctx.nv = v1 - v0;
  ctx.dofs.reserve(1 + ctx.nv + 2);
  ctx.dofs.push_back(c);
  for (int i = v0; i < v1; ++i)
    ctx.dofs.push_back(class_dof(classes_.class_of(m, m.cell_verts[i], c)));
  const int f0 = m.cell_face_offsets[c], f1 = m.cell_face_offsets[c + 1];
  ctx.face_trace_loc.assign(f1 - f0, -1);
  for (int i = f0; i < f1; ++i) {
    const int f = m.cell_faces[i];
    if (m.face_frac[f] < 0) continue;
    ctx.face_trace_loc[i - f0] = static_cast<int>(ctx.dofs.size());
    ctx.dofs.push_back(trace_dof(m.face_frac_index[f], side_of(f, c)));
  }
  return ctx;
}

void VagScheme::node_weights(const CellCtx& ctx, int c, int f, int face_slot, int s0, int s1,
                             NodeW out[4]) const
{
  const Mesh& m = *m_;
  const int v0 = m.cell_vert_offsets[c];
  auto vertex_loc = [&](int s) {
    for (int i = 0; i < ctx.nv; ++i)
      if (m.cell_verts[v0 + i] == s) return 1 + i;
    assert(false && "vertex not in cell");
    return -1;
  };
  out[0].n = 1;
  out[0].loc[0] = 0;
  out[0].w[0] = 1.0;
  if (ctx.face_trace_loc[face_slot] >= 0) {
    out[1].n = 1;
    out[1].loc[0] = ctx.face_trace_loc[face_slot];
    out[1].w[0] = 1.0;
  } else {
    // Non-fracture face value interpolated as the vertex mean (the face
    // center is the vertex barycenter).
    auto [fv, nfv] = m.face_vertex_span(f);
    out[1].n = nfv;
    for (int k = 0; k < nfv; ++k) {
      out[1].loc[k] = vertex_loc(fv[k]);
      out[1].w[k] = 1.0 / nfv;
    }
  }
  out[2].n = 1;
  out[2].loc[0] = vertex_loc(s0);
  out[2].w[0] = 1.0;
  out[3].n = 1;
  out[3].loc[0] = vertex_loc(s1);
  out[3].w[0] = 1.0;
}

void VagScheme::for_each_cell_block(const std::function<void(const LocalBlock&)>& fn) const
{
  const Mesh& m = *m_;
  LocalBlock blk;
  for (int c = 0; c < m.n_cells(); ++c) {
    const CellCtx ctx = cell_ctx(c);
    const int n = static_cast<int>(ctx.dofs.size());
    blk.dofs = ctx.dofs;
    blk.A = Eigen::MatrixXd::Zero(n, n);
    const Vector3d Kd = case_.K[m.cell_subdomain[c] - 1];
    const int f0 = m.cell_face_offsets[c];
    const int nf = m.cell_face_offsets[c + 1] - f0;
    for (int slot = 0; slot < nf; ++slot) {
      const int f = m.cell_faces[f0 + slot];
      auto [fv, nfv] = m.face_vertex_span(f);
      for (int k = 0; k < nfv; ++k) {
        const int s0 = fv[k], s1 = fv[(k + 1) % nfv];
        const Vector3d p[4] = {m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1]};
        const double vol = tet_volume(p[0], p[1], p[2], p[3]);
        Vector3d g[4];
        tet_gradients(p, g);
        NodeW w[4];
        node_weights(ctx, c, f, slot, s0, s1, w);
        for (int i = 0; i < 4; ++i) {
          const Vector3d Kg = Kd.cwiseProduct(g[i]);
          for (int j = 0; j < 4; ++j) {
            const double a = vol * Kg.dot(g[j]);
            for (int ia = 0; ia < w[i].n; ++ia)
              for (int jb = 0; jb < w[j].n; ++jb)
                blk.A(w[i].loc[ia], w[j].loc[jb]) += a * w[i].w[ia] * w[j].w[jb];
          }
        }
      }
    }
    fn(blk);
  }
}

void VagScheme::for_each_fracture_block(const std::function<void(const LocalBlock&)>& fn) const
{
  const Mesh& m = *m_;
  LocalBlock blk;
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    auto [fv, nfv] = m.face_vertex_span(f);
    blk.dofs.assign(1, fracture_face_dof(ffi));
    for (int k = 0; k < nfv; ++k) blk.dofs.push_back(vertex_dof(m.vert_frac_index[fv[k]]));
    const int n = 1 + nfv;
    blk.A = Eigen::MatrixXd::Zero(n, n);
    const double w = case_.d_f * case_.Kf[g];
    for (int k = 0; k < nfv; ++k) {
      const Vector3d q[3] = {m.face_center[f], m.points[fv[k]], m.points[fv[(k + 1) % nfv]]};
      const double area = tri_area(q[0], q[1], q[2]);
      Vector3d g3[3];
      tri_gradients(q, g3);
      const int loc[3] = {0, 1 + k, 1 + (k + 1) % nfv};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) blk.A(loc[i], loc[j]) += w * area * g3[i].dot(g3[j]);
    }
    fn(blk);
  }
}

void VagScheme::for_each_mf_block(const std::function<void(const MfBlock&)>& fn) const
{
  const Mesh& m = *m_;
  MfBlock mb;
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    auto [fv, nfv] = m.face_vertex_span(f);
    const int n = 1 + nfv;

    int cell_of[2];
    const int ca = m.face_cells[f][0], cb = m.face_cells[f][1];
    assert(cb >= 0 && "fracture face on the boundary");
    cell_of[side_of(f, ca)] = ca;
    cell_of[side_of(f, cb)] = cb;

    mb.face = f;
    mb.frac_dofs.assign(1, fracture_face_dof(ffi));
    for (int k = 0; k < nfv; ++k) mb.frac_dofs.push_back(vertex_dof(m.vert_frac_index[fv[k]]));
    for (int side = 0; side < 2; ++side) {
      mb.side_dofs[side].assign(1, trace_dof(ffi, side));
      for (int k = 0; k < nfv; ++k)
        mb.side_dofs[side].push_back(class_dof(classes_.class_of(m, fv[k], cell_of[side])));
    }

    mb.mass = Eigen::MatrixXd::Zero(n, n);
    const double Tf = case_.T[g];
    for (int k = 0; k < nfv; ++k) {
      const double area =
          tri_area(m.face_center[f], m.points[fv[k]], m.points[fv[(k + 1) % nfv]]);
      const int loc[3] = {0, 1 + k, 1 + (k + 1) % nfv};
      if (mode_ == VagMode::fe) {
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            mb.mass(loc[i], loc[j]) += Tf * area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
      } else {
        for (int i = 0; i < 3; ++i) mb.mass(loc[i], loc[i]) += Tf * area / 3.0;
      }
    }
    fn(mb);
  }
}

Eigen::VectorXd VagScheme::exact_dof_values() const
{
  const Mesh& m = *m_;
  Eigen::VectorXd v(layout_.n_total);
  for (int c = 0; c < m.n_cells(); ++c)
    v[c] = matrix_value(case_, m.cell_subdomain[c], m.cell_center[c]);
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    const Vector3d& x = m.face_center[f];
    for (int side = 0; side < 2; ++side)
      v[trace_dof(ffi, side)] = matrix_value(case_, frac_side_subdomain(g, side), x);
    v[fracture_face_dof(ffi)] = fracture_value(case_, g, x);
  }
  for (int cid = 0; cid < classes_.n_classes(); ++cid)
    v[class_dof(cid)] = matrix_value(case_, classes_.class_subdomain[cid],
                                     m.points[classes_.class_vertex[cid]]);
  for (int vfi = 0; vfi < static_cast<int>(m.frac_verts.size()); ++vfi)
    v[vertex_dof(vfi)] = fracture_value(case_, vert_wing_[vfi], m.points[m.frac_verts[vfi]]);
  return v;
}

void VagScheme::add_sources(Eigen::VectorXd& rhs) const
{
  const Mesh& m = *m_;
  for (int c = 0; c < m.n_cells(); ++c) {
    const CellCtx ctx = cell_ctx(c);
    const int om = m.cell_subdomain[c];
    const int f0 = m.cell_face_offsets[c];
    const int nf = m.cell_face_offsets[c + 1] - f0;
    double total = 0.0;
    for (int slot = 0; slot < nf; ++slot) {
      const int f = m.cell_faces[f0 + slot];
      auto [fv, nfv] = m.face_vertex_span(f);
      for (int k = 0; k < nfv; ++k) {
        const int s0 = fv[k], s1 = fv[(k + 1) % nfv];
        const Vector3d p[4] = {m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1]};
        if (mode_ == VagMode::fe) {
          NodeW w[4];
          node_weights(ctx, c, f, slot, s0, s1, w);
          for (int i = 0; i < 4; ++i) {
            const double vi =
                integrate_tet(p[0], p[1], p[2], p[3], [&](const Vector3d& x, const Eigen::Vector4d& bc) {
                  return bc[i] * matrix_source(case_, om, x);
                });
            for (int a = 0; a < w[i].n; ++a) rhs[ctx.dofs[w[i].loc[a]]] += w[i].w[a] * vi;
          }
        } else {
          total += integrate_tet(p[0], p[1], p[2], p[3], [&](const Vector3d& x, const Eigen::Vector4d&) {
            return matrix_source(case_, om, x);
          });
        }
      }
    }
    if (mode_ == VagMode::cv) {
      // Lumping: each non-Dirichlet stencil dof receives a small share of
      // the cell volume times the point value; the rest stays with the cell.
      const int nstencil = static_cast<int>(ctx.dofs.size()) - 1;
      const double share = 0.1 * m.cell_volume[c] / nstencil;
      double acc = 0.0;
      for (int i = 1; i <= nstencil; ++i) {
        const int dof = ctx.dofs[i];
        if (layout_.dirichlet[dof]) continue;
        const double hv = matrix_source(case_, om, layout_.position[dof]);
        rhs[dof] += share * hv;
        acc += share * hv;
      }
      rhs[c] += total - acc;
    }
  }

  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    auto [fv, nfv] = m.face_vertex_span(f);
    const double df = case_.d_f;
    if (mode_ == VagMode::fe) {
      for (int k = 0; k < nfv; ++k) {
        const Vector3d q[3] = {m.face_center[f], m.points[fv[k]], m.points[fv[(k + 1) % nfv]]};
        const int dof[3] = {fracture_face_dof(ffi), vertex_dof(m.vert_frac_index[fv[k]]),
                            vertex_dof(m.vert_frac_index[fv[(k + 1) % nfv]])};
        for (int i = 0; i < 3; ++i)
          rhs[dof[i]] += df * integrate_tri(q[0], q[1], q[2],
                                            [&](const Vector3d& x, const Vector3d& bc) {
                                              return bc[i] * fracture_source(case_, g, x);
                                            });
      }
    } else {
      double total = 0.0;
      for (int k = 0; k < nfv; ++k)
        total += df * integrate_tri(m.face_center[f], m.points[fv[k]], m.points[fv[(k + 1) % nfv]],
                                    [&](const Vector3d& x, const Vector3d&) {
                                      return fracture_source(case_, g, x);
                                    });
      const double share = 0.1 * m.face_area[f] / nfv;
      double acc = 0.0;
      for (int k = 0; k < nfv; ++k) {
        const int dof = vertex_dof(m.vert_frac_index[fv[k]]);
        if (layout_.dirichlet[dof]) continue;
        const double hv = df * share * fracture_source(case_, g, m.points[fv[k]]);
        rhs[dof] += hv;
        acc += hv;
      }
      rhs[fracture_face_dof(ffi)] += total - acc;
    }
  }
}

Eigen::VectorXd VagScheme::face_pairing(int face,
                                        const std::function<double(const Vector3d&)>& r) const
{
  const Mesh& m = *m_;
  auto [fv, nfv] = m.face_vertex_span(face);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(1 + nfv);
  for (int k = 0; k < nfv; ++k) {
    const Vector3d q[3] = {m.face_center[face], m.points[fv[k]], m.points[fv[(k + 1) % nfv]]};
    const int loc[3] = {0, 1 + k, 1 + (k + 1) % nfv};
    if (mode_ == VagMode::fe) {
      for (int i = 0; i < 3; ++i)
        w[loc[i]] += integrate_tri(q[0], q[1], q[2], [&](const Vector3d& x, const Vector3d& bc) {
          return bc[i] * r(x);
        });
    } else {
      for (int i = 0; i < 3; ++i) {
        const Kite kt = corner_kite(q, i);
        auto plain = [&](const Vector3d& x, const Vector3d&) { return r(x); };
        w[loc[i]] += integrate_tri(kt.t1[0], kt.t1[1], kt.t1[2], plain) +
                     integrate_tri(kt.t2[0], kt.t2[1], kt.t2[2], plain);
      }
    }
  }
  return w;
}

void VagScheme::add_sigma_source(const std::function<double(const Vector3d&)>& q,
                                 Eigen::VectorXd& rhs) const
{
  const Mesh& m = *m_;
  for (int e = 0; e < m.n_edges(); ++e) {
    if (!m.edge_on_sigma[e]) continue;
    const int s0 = m.edge_verts[e][0], s1 = m.edge_verts[e][1];
    const Vector3d a = m.points[s0], b = m.points[s1];
    const int d0 = vertex_dof(m.vert_frac_index[s0]);
    const int d1 = vertex_dof(m.vert_frac_index[s1]);
    if (mode_ == VagMode::fe) {
      const double len = (b - a).norm();
      rhs[d0] -= integrate_segment(a, b, [&](const Vector3d& x) {
        return q(x) * (1.0 - (x - a).norm() / len);
      });
      rhs[d1] -= integrate_segment(a, b, [&](const Vector3d& x) {
        return q(x) * ((x - a).norm() / len);
      });
    } else {
      const Vector3d mid = 0.5 * (a + b);
      rhs[d0] -= integrate_segment(a, mid, q);
      rhs[d1] -= integrate_segment(mid, b, q);
    }
  }
}

Vector3d VagScheme::cell_gradient(int c, const Eigen::VectorXd& u) const
{
  const Mesh& m = *m_;
  const CellCtx ctx = cell_ctx(c);
  Vector3d acc = Vector3d::Zero();
  const int f0 = m.cell_face_offsets[c];
  const int nf = m.cell_face_offsets[c + 1] - f0;
  for (int slot = 0; slot < nf; ++slot) {
    const int f = m.cell_faces[f0 + slot];
    auto [fv, nfv] = m.face_vertex_span(f);
    for (int k = 0; k < nfv; ++k) {
      const int s0 = fv[k], s1 = fv[(k + 1) % nfv];
      const Vector3d p[4] = {m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1]};
      const double vol = tet_volume(p[0], p[1], p[2], p[3]);
      Vector3d g[4];
      tet_gradients(p, g);
      NodeW w[4];
      node_weights(ctx, c, f, slot, s0, s1, w);
      for (int i = 0; i < 4; ++i) {
        double vi = 0.0;
        for (int a = 0; a < w[i].n; ++a) vi += w[i].w[a] * u[ctx.dofs[w[i].loc[a]]];
        acc += vol * vi * g[i];
      }
    }
  }
  return acc / m.cell_volume[c];
}

Vector3d VagScheme::fracture_gradient(int ffi, const Eigen::VectorXd& u) const
{
  const Mesh& m = *m_;
  const int f = m.frac_faces[ffi];
  auto [fv, nfv] = m.face_vertex_span(f);
  Vector3d acc = Vector3d::Zero();
  for (int k = 0; k < nfv; ++k) {
    const Vector3d q[3] = {m.face_center[f], m.points[fv[k]], m.points[fv[(k + 1) % nfv]]};
    const double area = tri_area(q[0], q[1], q[2]);
    Vector3d g3[3];
    tri_gradients(q, g3);
    const double v[3] = {u[fracture_face_dof(ffi)],
                         u[vertex_dof(m.vert_frac_index[fv[k]])],
                         u[vertex_dof(m.vert_frac_index[fv[(k + 1) % nfv]])]};
    for (int i = 0; i < 3; ++i) acc += area * v[i] * g3[i];
  }
  return acc / m.face_area[f];
}

QuadratureErrors VagScheme::quadrature_errors(const Eigen::VectorXd& u, int refine) const
{
  const Mesh& m = *m_;
  QuadratureErrors qe;

  for (int c = 0; c < m.n_cells(); ++c) {
    const CellCtx ctx = cell_ctx(c);
    const int om = m.cell_subdomain[c];
    const int f0 = m.cell_face_offsets[c];
    const int nf = m.cell_face_offsets[c + 1] - f0;
    for (int slot = 0; slot < nf; ++slot) {
      const int f = m.cell_faces[f0 + slot];
      auto [fv, nfv] = m.face_vertex_span(f);
      for (int k = 0; k < nfv; ++k) {
        const int s0 = fv[k], s1 = fv[(k + 1) % nfv];
        const Vector3d p[4] = {m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1]};
        Vector3d g[4];
        tet_gradients(p, g);
        NodeW w[4];
        node_weights(ctx, c, f, slot, s0, s1, w);
        double v[4];
        Vector3d gh = Vector3d::Zero();
        for (int i = 0; i < 4; ++i) {
          v[i] = 0.0;
          for (int a = 0; a < w[i].n; ++a) v[i] += w[i].w[a] * u[ctx.dofs[w[i].loc[a]]];
          gh += v[i] * g[i];
        }
        auto rec = [&](const Vector3d& x) {
          return mode_ == VagMode::fe ? v[0] + gh.dot(x - p[0]) : u[c];
        };
        qe.sol_num_m += integrate_tet(p[0], p[1], p[2], p[3],
                                      [&](const Vector3d& x, const Eigen::Vector4d&) {
                                        const double d = rec(x) - matrix_value(case_, om, x);
                                        return d * d;
                                      },
                                      refine);
        qe.sol_den_m += integrate_tet(p[0], p[1], p[2], p[3],
                                      [&](const Vector3d& x, const Eigen::Vector4d&) {
                                        const double e = matrix_value(case_, om, x);
                                        return e * e;
                                      },
                                      refine);
        qe.grad_num_m += integrate_tet(p[0], p[1], p[2], p[3],
                                       [&](const Vector3d& x, const Eigen::Vector4d&) {
                                         return (gh - matrix_gradient(case_, om, x)).squaredNorm();
                                       },
                                       refine);
        qe.grad_den_m += integrate_tet(p[0], p[1], p[2], p[3],
                                       [&](const Vector3d& x, const Eigen::Vector4d&) {
                                         return matrix_gradient(case_, om, x).squaredNorm();
                                       },
                                       refine);
      }
    }
  }

  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    auto [fv, nfv] = m.face_vertex_span(f);

    int cell_of[2];
    const int ca = m.face_cells[f][0], cb = m.face_cells[f][1];
    cell_of[side_of(f, ca)] = ca;
    cell_of[side_of(f, cb)] = cb;

    for (int k = 0; k < nfv; ++k) {
      const int s0 = fv[k], s1 = fv[(k + 1) % nfv];
      const Vector3d q[3] = {m.face_center[f], m.points[s0], m.points[s1]};
      Vector3d g3[3];
      tri_gradients(q, g3);
      const double vf[3] = {u[fracture_face_dof(ffi)], u[vertex_dof(m.vert_frac_index[s0])],
                            u[vertex_dof(m.vert_frac_index[s1])]};
      const Vector3d ghf = vf[0] * g3[0] + vf[1] * g3[1] + vf[2] * g3[2];
      auto recf = [&](const Vector3d& x) {
        return mode_ == VagMode::fe ? vf[0] + ghf.dot(x - q[0]) : u[fracture_face_dof(ffi)];
      };
      qe.sol_num_f += integrate_tri(q[0], q[1], q[2],
                                    [&](const Vector3d& x, const Vector3d&) {
                                      const double d = recf(x) - fracture_value(case_, g, x);
                                      return d * d;
                                    },
                                    refine);
      qe.sol_den_f += integrate_tri(q[0], q[1], q[2],
                                    [&](const Vector3d& x, const Vector3d&) {
                                      const double e = fracture_value(case_, g, x);
                                      return e * e;
                                    },
                                    refine);
      qe.grad_num_f += integrate_tri(q[0], q[1], q[2],
                                     [&](const Vector3d& x, const Vector3d&) {
                                       return (ghf - fracture_gradient3(case_, g, x)).squaredNorm();
                                     },
                                     refine);
      qe.grad_den_f += integrate_tri(q[0], q[1], q[2],
                                     [&](const Vector3d& x, const Vector3d&) {
                                       return fracture_gradient3(case_, g, x).squaredNorm();
                                     },
                                     refine);

      // Interface jump, one contribution per side.
      for (int side = 0; side < 2; ++side) {
        const int sub = frac_side_subdomain(g, side);
        const int idx = 2 * g + side;
        const double vt[3] = {u[trace_dof(ffi, side)],
                              u[class_dof(classes_.class_of(m, s0, cell_of[side]))],
                              u[class_dof(classes_.class_of(m, s1, cell_of[side]))]};
        auto exact_jump = [&](const Vector3d& x) {
          return matrix_value(case_, sub, x) - fracture_value(case_, g, x);
        };
        if (mode_ == VagMode::fe) {
          const double d0 = vt[0] - vf[0];
          const Vector3d gd = (vt[0] - vf[0]) * g3[0] + (vt[1] - vf[1]) * g3[1] +
                              (vt[2] - vf[2]) * g3[2];
          qe.jump_num[idx] += integrate_tri(q[0], q[1], q[2],
                                            [&](const Vector3d& x, const Vector3d&) {
                                              const double d =
                                                  d0 + gd.dot(x - q[0]) - exact_jump(x);
                                              return d * d;
                                            },
                                            refine);
        } else {
          for (int i = 0; i < 3; ++i) {
            const Kite kt = corner_kite(q, i);
            const double dh = vt[i] - vf[i];
            auto fn = [&](const Vector3d& x, const Vector3d&) {
              const double d = dh - exact_jump(x);
              return d * d;
            };
            qe.jump_num[idx] += integrate_tri(kt.t1[0], kt.t1[1], kt.t1[2], fn, refine) +
                                integrate_tri(kt.t2[0], kt.t2[1], kt.t2[2], fn, refine);
          }
        }
        qe.jump_den_plus[idx] += integrate_tri(q[0], q[1], q[2],
                                               [&](const Vector3d& x, const Vector3d&) {
                                                 const double e = matrix_value(case_, sub, x) +
                                                                  fracture_value(case_, g, x);
                                                 return e * e;
                                               },
                                               refine);
        qe.jump_den_minus[idx] += integrate_tri(q[0], q[1], q[2],
                                                [&](const Vector3d& x, const Vector3d&) {
                                                  const double e = exact_jump(x);
                                                  return e * e;
                                                },
                                                refine);
      }
    }
  }
  return qe;
}

} // namespace dfm
