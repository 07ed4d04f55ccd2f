// Error norms, convergence orders and the CSV study table.

#include <dfm/errors.hpp>

#include <dfm/model.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace dfm
{

ErrorReport compute_errors(const Scheme& s, const Eigen::VectorXd& u, JumpDenominator jd,
                           int refine)
{
  const Mesh& m = s.mesh();
  const Case& cs = s.problem();
  ErrorReport rep;

  // Solution and gradient: relative L2 norms sampled at the dof anchors,
  // matrix and fracture parts normalized by the sum of the reference norms.
  double num_sm = 0, den_sm = 0, num_gm = 0, den_gm = 0;
  for (int c = 0; c < m.n_cells(); ++c) {
    const int om = m.cell_subdomain[c];
    const Vector3d& x = m.cell_center[c];
    const double vol = m.cell_volume[c];
    const double ue = matrix_value(cs, om, x);
    num_sm += vol * (u[c] - ue) * (u[c] - ue);
    den_sm += vol * ue * ue;
    const Vector3d ge = matrix_gradient(cs, om, x);
    const Vector3d gh = s.cell_gradient(c, u);
    num_gm += vol * (gh - ge).squaredNorm();
    den_gm += vol * ge.squaredNorm();
  }
  double num_sf = 0, den_sf = 0, num_gf = 0, den_gf = 0;
  const int nff = static_cast<int>(m.frac_faces.size());
  for (int ffi = 0; ffi < nff; ++ffi) {
    const int f = m.frac_faces[ffi];
    const int g = m.face_frac[f];
    const Vector3d& x = m.face_center[f];
    const double w = cs.d_f * m.face_area[f];
    const double ue = fracture_value(cs, g, x);
    const double uh = u[s.fracture_face_dof(ffi)];
    num_sf += w * (uh - ue) * (uh - ue);
    den_sf += w * ue * ue;
    const Vector3d ge = fracture_gradient3(cs, g, x);
    const Vector3d gh = s.fracture_gradient(ffi, u);
    num_gf += w * (gh - ge).squaredNorm();
    den_gf += w * ge.squaredNorm();
  }
  rep.sol = std::sqrt(num_sm + num_sf) / (std::sqrt(den_sm) + std::sqrt(den_sf));
  rep.grad = (std::sqrt(num_gm) + std::sqrt(num_gf)) /
             (std::sqrt(den_gm) + std::sqrt(den_gf));

  // Jump: per fracture face the discrete jump is the face mean of the
  // reconstructed trace difference, \int_sigma (Pi^a u - Pi_f u) / |sigma|,
  // compared against the reference jump at the face center. One term per
  // (fracture, side); the numerator norms are summed, the denominator is a
  // single norm over all sides.
  std::array<double, 8> jn{}, jdp{}, jdm{};
  double jump_abs2 = 0;
  s.for_each_mf_block([&](const MfBlock& blk) {
    const int f = blk.face;
    const int g = m.face_frac[f];
    const double area = m.face_area[f];
    const double w = cs.d_f * area;
    const Eigen::VectorXd phi = s.face_pairing(f, [](const Vector3d&) { return 1.0; });
    const double ufe = fracture_value(cs, g, m.face_center[f]);
    for (int side = 0; side < 2; ++side) {
      const int idx = 2 * g + side;
      double jh = 0;
      for (int k = 0; k < static_cast<int>(blk.frac_dofs.size()); ++k)
        jh += phi[k] * (u[blk.side_dofs[side][k]] - u[blk.frac_dofs[k]]);
      jh /= area;
      jump_abs2 += w * jh * jh;
      const double ume = matrix_value(cs, frac_side_subdomain(g, side), m.face_center[f]);
      const double de = ume - ufe;
      jn[idx] += w * (jh - de) * (jh - de);
      jdp[idx] += w * (ume + ufe) * (ume + ufe);
      jdm[idx] += w * de * de;
    }
  });
  double jnum = 0, jden2 = 0, jnum_q = 0, jden2_q = 0;
  const QuadratureErrors qe = s.quadrature_errors(u, refine);
  for (int idx = 0; idx < 8; ++idx) {
    jnum += std::sqrt(jn[idx]);
    jden2 += jd == JumpDenominator::plus ? jdp[idx] : jdm[idx];
    jnum_q += std::sqrt(qe.jump_num[idx]);
    jden2_q += jd == JumpDenominator::plus ? qe.jump_den_plus[idx] : qe.jump_den_minus[idx];
  }
  rep.jump = jnum / std::sqrt(jden2);
  rep.jump_abs = std::sqrt(jump_abs2);
  rep.jump_q = jnum_q / std::sqrt(jden2_q);

  rep.sol_q = std::sqrt(qe.sol_num_m + cs.d_f * qe.sol_num_f) /
              (std::sqrt(qe.sol_den_m) + std::sqrt(cs.d_f * qe.sol_den_f));
  rep.grad_q = (std::sqrt(qe.grad_num_m) + std::sqrt(cs.d_f * qe.grad_num_f)) /
               (std::sqrt(qe.grad_den_m) + std::sqrt(cs.d_f * qe.grad_den_f));
  return rep;
}

double convergence_order(double e_coarse, double e_fine, int cells_coarse, int cells_fine)
{
  return 3.0 * std::log(e_coarse / e_fine) /
         std::log(static_cast<double>(cells_fine) / cells_coarse);
}

void write_csv(const std::vector<StudyRow>& rows, std::ostream& out)
{
  out << "mesh,scheme,case,cells,dofs,iterations,cpu_s,"
         "err_sol,err_grad,err_jump,alpha_sol,alpha_grad,alpha_jump\n";
  char buf[512];
  for (const StudyRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%d,%d,%.3f,%.6e,%.6e,%.6e,%.3f,%.3f,%.3f\n",
                  r.mesh.c_str(), r.scheme.c_str(), r.problem.c_str(), r.cells, r.dofs,
                  r.iterations, r.cpu_seconds, r.err.sol, r.err.grad, r.err.jump, r.alpha_sol,
                  r.alpha_grad, r.alpha_jump);
    out << buf;
  }
}

} // namespace dfm
