// Hybrid finite volume scheme: cone-stabilized gradient reconstruction on
// cells and fracture faces, per-side fracture face unknowns, and the
// face-lumped matrix-fracture coupling.

#include <dfm/hfv.hpp>

#include <dfm/quadrature.hpp>

#include <cassert>
#include <cmath>

namespace dfm
{

HfvScheme::HfvScheme(const Mesh& m, const Case& cs) : m_(&m), case_(cs)
{
  const int nc = m.n_cells();
  n_frac_faces_ = static_cast<int>(m.frac_faces.size());
  const int nfe = static_cast<int>(m.frac_edges.size());

  face_dof_.resize(m.n_faces());
  int next = nc;
  for (int f = 0; f < m.n_faces(); ++f) {
    face_dof_[f] = next;
    next += m.face_frac[f] >= 0 ? 2 : 1;
  }

  layout_.n_cells = nc;
  layout_.n_matrix = next;
  layout_.n_total = next + n_frac_faces_ + nfe;
  layout_.dirichlet.assign(layout_.n_total, 0);
  layout_.position.resize(layout_.n_total);

  for (int c = 0; c < nc; ++c) layout_.position[c] = m.cell_center[c];
  for (int f = 0; f < m.n_faces(); ++f) {
    layout_.position[face_dof_[f]] = m.face_center[f];
    if (m.face_frac[f] >= 0) {
      assert(m.face_cells[f][1] >= 0 && "fracture face on the boundary");
      layout_.position[face_dof_[f] + 1] = m.face_center[f];
    } else if (m.face_cells[f][1] < 0) {
      layout_.dirichlet[face_dof_[f]] = 1;
    }
  }
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi)
    layout_.position[fracture_face_dof(ffi)] = m.face_center[m.frac_faces[ffi]];
  edge_wing_.assign(nfe, 0);
  for (int efi = 0; efi < nfe; ++efi) {
    const int e = m.frac_edges[efi];
    const auto& ev = m.edge_verts[e];
    layout_.position[edge_dof(efi)] = 0.5 * (m.points[ev[0]] + m.points[ev[1]]);
    layout_.dirichlet[edge_dof(efi)] = m.edge_on_boundary[e];
  }
  for (const int f : m.frac_faces) {
    const int g = m.face_frac[f];
    for (int k = m.face_edge_offsets[f]; k < m.face_edge_offsets[f + 1]; ++k)
      edge_wing_[m.edge_frac_index[m.face_edges[k]]] = g;
  }
}

int HfvScheme::side_of(int f, int c) const
{
  const int axis = frac_normal_axis(m_->face_frac[f]);
  return m_->cell_center[c][axis] < 0.0 ? 0 : 1;
}

HfvScheme::ConeOp HfvScheme::cell_op(int c) const
{
  const Mesh& m = *m_;
  ConeOp op;
  const Vector3d xk = m.cell_center[c];
  const double vol = m.cell_volume[c];
  const int f0 = m.cell_face_offsets[c];
  const int nf = m.cell_face_offsets[c + 1] - f0;

  op.dofs.reserve(1 + nf);
  op.dofs.push_back(c);
  for (int i = 0; i < nf; ++i) {
    const int f = m.cell_faces[f0 + i];
    op.dofs.push_back(m.face_frac[f] >= 0 ? face_dof_[f] + side_of(f, c) : face_dof_[f]);
  }

  op.G = Eigen::Matrix3Xd::Zero(3, 1 + nf);
  std::vector<Vector3d> n(nf);
  std::vector<double> d(nf);
  for (int i = 0; i < nf; ++i) {
    const int f = m.cell_faces[f0 + i];
    n[i] = m.outward_normal(f, c);
    d[i] = n[i].dot(m.face_center[f] - xk);
    assert(d[i] > 0.0);
    op.G.col(1 + i) = m.face_area[f] / vol * n[i];
    op.G.col(0) -= m.face_area[f] / vol * n[i];
  }

  op.M.resize(nf);
  op.vol.resize(nf);
  for (int i = 0; i < nf; ++i) {
    const int f = m.cell_faces[f0 + i];
    const double s = std::sqrt(3.0) / d[i];
    Eigen::RowVectorXd r = -s * (m.face_center[f] - xk).transpose() * op.G;
    r[0] -= s;
    r[1 + i] += s;
    op.M[i] = op.G + n[i] * r;
    op.vol[i] = m.face_area[f] * d[i] / 3.0;
  }
  return op;
}

HfvScheme::ConeOp HfvScheme::face_op(int ffi) const
{
  const Mesh& m = *m_;
  ConeOp op;
  const int f = m.frac_faces[ffi];
  const Vector3d xs = m.face_center[f];
  const Vector3d N = m.face_normal[f];
  const double area = m.face_area[f];
  const int e0 = m.face_edge_offsets[f];
  const int ne = m.face_edge_offsets[f + 1] - e0;

  op.dofs.reserve(1 + ne);
  op.dofs.push_back(fracture_face_dof(ffi));
  for (int i = 0; i < ne; ++i)
    op.dofs.push_back(edge_dof(m.edge_frac_index[m.face_edges[e0 + i]]));

  op.G = Eigen::Matrix3Xd::Zero(3, 1 + ne);
  std::vector<Vector3d> n(ne);
  std::vector<double> d(ne);
  for (int i = 0; i < ne; ++i) {
    const int e = m.face_edges[e0 + i];
    const Vector3d a = m.points[m.edge_verts[e][0]], b = m.points[m.edge_verts[e][1]];
    const double len = (b - a).norm();
    const Vector3d xe = 0.5 * (a + b);
    Vector3d ne3 = (b - a).cross(N) / len;
    if (ne3.dot(xe - xs) < 0.0) ne3 = -ne3;
    n[i] = ne3;
    d[i] = ne3.dot(xe - xs);
    assert(d[i] > 0.0);
    op.G.col(1 + i) = len / area * ne3;
    op.G.col(0) -= len / area * ne3;
  }

  op.M.resize(ne);
  op.vol.resize(ne);
  for (int i = 0; i < ne; ++i) {
    const int e = m.face_edges[e0 + i];
    const auto& ev = m.edge_verts[e];
    const Vector3d xe = 0.5 * (m.points[ev[0]] + m.points[ev[1]]);
    const double len = (m.points[ev[1]] - m.points[ev[0]]).norm();
    const double s = std::sqrt(2.0) / d[i];
    Eigen::RowVectorXd r = -s * (xe - xs).transpose() * op.G;
    r[0] -= s;
    r[1 + i] += s;
    op.M[i] = op.G + n[i] * r;
    op.vol[i] = len * d[i] / 2.0;
  }
  return op;
}

void HfvScheme::for_each_cell_block(const std::function<void(const LocalBlock&)>& fn) const
{
  const Mesh& m = *m_;
  LocalBlock blk;
  for (int c = 0; c < m.n_cells(); ++c) {
    const ConeOp op = cell_op(c);
    const Vector3d Kd = case_.K[m.cell_subdomain[c] - 1];
    const int n = static_cast<int>(op.dofs.size());
    blk.dofs = op.dofs;
    blk.A = Eigen::MatrixXd::Zero(n, n);
    for (size_t i = 0; i < op.M.size(); ++i)
      blk.A += op.vol[i] * op.M[i].transpose() * Kd.asDiagonal() * op.M[i];
    fn(blk);
  }
}

void HfvScheme::for_each_fracture_block(const std::function<void(const LocalBlock&)>& fn) const
{
  const Mesh& m = *m_;
  LocalBlock blk;
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const ConeOp op = face_op(ffi);
    const double w = case_.d_f * case_.Kf[m.face_frac[m.frac_faces[ffi]]];
    const int n = static_cast<int>(op.dofs.size());
    blk.dofs = op.dofs;
    blk.A = Eigen::MatrixXd::Zero(n, n);
    for (size_t i = 0; i < op.M.size(); ++i)
      blk.A += w * op.vol[i] * op.M[i].transpose() * op.M[i];
    fn(blk);
  }
}

void HfvScheme::for_each_mf_block(const std::function<void(const MfBlock&)>& fn) const
{
  const Mesh& m = *m_;
  MfBlock mb;
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    mb.face = f;
    mb.side_dofs[0].assign(1, face_dof_[f]);
    mb.side_dofs[1].assign(1, face_dof_[f] + 1);
    mb.frac_dofs.assign(1, fracture_face_dof(ffi));
    mb.mass = Eigen::MatrixXd::Constant(1, 1, case_.T[m.face_frac[f]] * m.face_area[f]);
    fn(mb);
  }
}

Eigen::VectorXd HfvScheme::exact_dof_values() const
{
  const Mesh& m = *m_;
  Eigen::VectorXd v(layout_.n_total);
  for (int c = 0; c < m.n_cells(); ++c)
    v[c] = matrix_value(case_, m.cell_subdomain[c], m.cell_center[c]);
  for (int f = 0; f < m.n_faces(); ++f) {
    const Vector3d& x = m.face_center[f];
    if (m.face_frac[f] >= 0) {
      const int g = m.face_frac[f];
      v[face_dof_[f]] = matrix_value(case_, frac_side_subdomain(g, 0), x);
      v[face_dof_[f] + 1] = matrix_value(case_, frac_side_subdomain(g, 1), x);
    } else {
      v[face_dof_[f]] = matrix_value(case_, m.cell_subdomain[m.face_cells[f][0]], x);
    }
  }
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    v[fracture_face_dof(ffi)] = fracture_value(case_, m.face_frac[f], m.face_center[f]);
  }
  for (int efi = 0; efi < static_cast<int>(m.frac_edges.size()); ++efi)
    v[edge_dof(efi)] = fracture_value(case_, edge_wing_[efi], layout_.position[edge_dof(efi)]);
  return v;
}

void HfvScheme::add_sources(Eigen::VectorXd& rhs) const
{
  const Mesh& m = *m_;
  for (int c = 0; c < m.n_cells(); ++c) {
    const int om = m.cell_subdomain[c];
    double acc = 0.0;
    for_each_subtet(m, c, [&](int f, int s0, int s1) {
      acc += integrate_tet(m.cell_center[c], m.face_center[f], m.points[s0], m.points[s1],
                           [&](const Vector3d& x, const Eigen::Vector4d&) {
                             return matrix_source(case_, om, x);
                           });
    });
    rhs[c] += acc;
  }
  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    double acc = 0.0;
    for_each_subtri(m, f, [&](int s0, int s1) {
      acc += integrate_tri(m.face_center[f], m.points[s0], m.points[s1],
                           [&](const Vector3d& x, const Vector3d&) {
                             return fracture_source(case_, g, x);
                           });
    });
    rhs[fracture_face_dof(ffi)] += case_.d_f * acc;
  }
}

Eigen::VectorXd HfvScheme::face_pairing(int face,
                                        const std::function<double(const Vector3d&)>& r) const
{
  const Mesh& m = *m_;
  double acc = 0.0;
  for_each_subtri(m, face, [&](int s0, int s1) {
    acc += integrate_tri(m.face_center[face], m.points[s0], m.points[s1],
                         [&](const Vector3d& x, const Vector3d&) { return r(x); });
  });
  Eigen::VectorXd w(1);
  w[0] = acc;
  return w;
}

void HfvScheme::add_sigma_source(const std::function<double(const Vector3d&)>& q,
                                 Eigen::VectorXd& rhs) const
{
  const Mesh& m = *m_;
  for (int e = 0; e < m.n_edges(); ++e) {
    if (!m.edge_on_sigma[e]) continue;
    const auto& ev = m.edge_verts[e];
    rhs[edge_dof(m.edge_frac_index[e])] -=
        integrate_segment(m.points[ev[0]], m.points[ev[1]], q);
  }
}

Vector3d HfvScheme::cell_gradient(int c, const Eigen::VectorXd& u) const
{
  const ConeOp op = cell_op(c);
  Eigen::VectorXd ul(op.dofs.size());
  for (size_t i = 0; i < op.dofs.size(); ++i) ul[i] = u[op.dofs[i]];
  return op.G * ul;
}

Vector3d HfvScheme::fracture_gradient(int ffi, const Eigen::VectorXd& u) const
{
  const ConeOp op = face_op(ffi);
  Eigen::VectorXd ul(op.dofs.size());
  for (size_t i = 0; i < op.dofs.size(); ++i) ul[i] = u[op.dofs[i]];
  return op.G * ul;
}

QuadratureErrors HfvScheme::quadrature_errors(const Eigen::VectorXd& u, int refine) const
{
  const Mesh& m = *m_;
  QuadratureErrors qe;

  for (int c = 0; c < m.n_cells(); ++c) {
    const int om = m.cell_subdomain[c];
    const double uc = u[c];
    const Vector3d gh = cell_gradient(c, u);
    for_each_subtet(m, c, [&](int f, int s0, int s1) {
      const Vector3d& a = m.cell_center[c];
      const Vector3d& b = m.face_center[f];
      const Vector3d& p2 = m.points[s0];
      const Vector3d& p3 = m.points[s1];
      qe.sol_num_m += integrate_tet(a, b, p2, p3,
                                    [&](const Vector3d& x, const Eigen::Vector4d&) {
                                      const double d = uc - matrix_value(case_, om, x);
                                      return d * d;
                                    },
                                    refine);
      qe.sol_den_m += integrate_tet(a, b, p2, p3,
                                    [&](const Vector3d& x, const Eigen::Vector4d&) {
                                      const double e = matrix_value(case_, om, x);
                                      return e * e;
                                    },
                                    refine);
      qe.grad_num_m += integrate_tet(a, b, p2, p3,
                                     [&](const Vector3d& x, const Eigen::Vector4d&) {
                                       return (gh - matrix_gradient(case_, om, x)).squaredNorm();
                                     },
                                     refine);
      qe.grad_den_m += integrate_tet(a, b, p2, p3,
                                     [&](const Vector3d& x, const Eigen::Vector4d&) {
                                       return matrix_gradient(case_, om, x).squaredNorm();
                                     },
                                     refine);
    });
  }

  for (int ffi = 0; ffi < n_frac_faces_; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    const double uf = u[fracture_face_dof(ffi)];
    const Vector3d ghf = fracture_gradient(ffi, u);
    for_each_subtri(m, f, [&](int s0, int s1) {
      const Vector3d& a = m.face_center[f];
      const Vector3d& p1 = m.points[s0];
      const Vector3d& p2 = m.points[s1];
      qe.sol_num_f += integrate_tri(a, p1, p2,
                                    [&](const Vector3d& x, const Vector3d&) {
                                      const double d = uf - fracture_value(case_, g, x);
                                      return d * d;
                                    },
                                    refine);
      qe.sol_den_f += integrate_tri(a, p1, p2,
                                    [&](const Vector3d& x, const Vector3d&) {
                                      const double e = fracture_value(case_, g, x);
                                      return e * e;
                                    },
                                    refine);
      qe.grad_num_f += integrate_tri(a, p1, p2,
                                     [&](const Vector3d& x, const Vector3d&) {
                                       return (ghf - fracture_gradient3(case_, g, x)).squaredNorm();
                                     },
                                     refine);
      qe.grad_den_f += integrate_tri(a, p1, p2,
                                     [&](const Vector3d& x, const Vector3d&) {
                                       return fracture_gradient3(case_, g, x).squaredNorm();
                                     },
                                     refine);
      for (int side = 0; side < 2; ++side) {
        const int sub = frac_side_subdomain(g, side);
        const int idx = 2 * g + side;
        const double dh = u[face_dof_[f] + side] - uf;
        qe.jump_num[idx] += integrate_tri(a, p1, p2,
                                          [&](const Vector3d& x, const Vector3d&) {
                                            const double d = dh - (matrix_value(case_, sub, x) -
                                                                   fracture_value(case_, g, x));
                                            return d * d;
                                          },
                                          refine);
        qe.jump_den_plus[idx] += integrate_tri(a, p1, p2,
                                               [&](const Vector3d& x, const Vector3d&) {
                                                 const double e = matrix_value(case_, sub, x) +
                                                                  fracture_value(case_, g, x);
                                                 return e * e;
                                               },
                                               refine);
        qe.jump_den_minus[idx] += integrate_tri(a, p1, p2,
                                                [&](const Vector3d& x, const Vector3d&) {
                                                  const double e = matrix_value(case_, sub, x) -
                                                                   fracture_value(case_, g, x);
                                                  return e * e;
                                                },
                                                refine);
      }
    });
  }
  return qe;
}

} // namespace dfm
