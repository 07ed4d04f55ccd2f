// Assembly of the coupled matrix-fracture system and the fill-in free
// elimination of the cell unknowns.

#include <dfm/assembly.hpp>

#include <dfm/hfv.hpp>
#include <dfm/model.hpp>
#include <dfm/vag.hpp>

#include <cassert>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dfm
{

std::unique_ptr<Scheme> make_scheme(SchemeKind kind, const Mesh& m, const Case& cs)
{
  switch (kind) {
    case SchemeKind::vag_fe: return std::make_unique<VagScheme>(m, cs, VagMode::fe);
    case SchemeKind::vag_cv: return std::make_unique<VagScheme>(m, cs, VagMode::cv);
    case SchemeKind::hfv: return std::make_unique<HfvScheme>(m, cs);
  }
  throw std::logic_error("unknown scheme kind");
}

AssembledSystem assemble_system(const Scheme& s, const AssemblyOptions& opt)
{
  if (!(opt.xi > 0.5)) throw std::invalid_argument("xi must exceed 1/2");

  const DofLayout& lay = s.layout();
  const Case& cs = s.problem();
  const int n = lay.n_total;
  const int nc = lay.n_cells;

  AssembledSystem sys;
  sys.dirichlet = lay.dirichlet;
  if (opt.sigma_mode == SigmaMode::dirichlet_pin) {
    // Pin the fracture unknowns sitting on the intersection line.
    for (int i = lay.n_matrix; i < n; ++i) {
      const Vector3d& x = lay.position[i];
      if (std::abs(x[0]) < 1e-12 && std::abs(x[1]) < 1e-12) sys.dirichlet[i] = 1;
    }
  }

  sys.b = Eigen::VectorXd::Zero(n);
  s.add_sources(sys.b);
  if (opt.sigma_mode == SigmaMode::line_source)
    s.add_sigma_source([&](const Vector3d& x) { return sigma_outflow(cs, x[2]); }, sys.b);

  const Eigen::VectorXd exact = s.exact_dof_values();

  std::vector<Triplet> trip;
  sys.cells.resize(nc);
  auto add = [&](int i, int j, double a) {
    if (sys.dirichlet[i]) return;
    if (sys.dirichlet[j]) {
      sys.b[i] -= a * exact[j];
      return;
    }
    trip.push_back({i, j, a});
  };

  s.for_each_cell_block([&](const LocalBlock& blk) {
    const int m = static_cast<int>(blk.dofs.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) add(blk.dofs[i], blk.dofs[j], blk.A(i, j));
  });
  s.for_each_fracture_block([&](const LocalBlock& blk) {
    const int m = static_cast<int>(blk.dofs.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) add(blk.dofs[i], blk.dofs[j], blk.A(i, j));
  });

  // Coupling pattern between the two side traces (P, Q) and the fracture
  // unknowns (F):  [ xi M      (1-xi) M  -M   ]
  //                [ (1-xi) M  xi M      -M   ]  all divided by (2 xi - 1).
  //                [ -M        -M        2 M  ]
  const double den = 2.0 * opt.xi - 1.0;
  auto add_mf = [&](const std::vector<int>& rows, const std::vector<int>& cols,
                    const Eigen::MatrixXd& M, double fac) {
    if (fac == 0.0) return;
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j) {
        if (M(i, j) == 0.0) continue;
        add(rows[i], cols[j], fac * M(i, j));
      }
  };
  s.for_each_mf_block([&](const MfBlock& mb) {
    const auto& P = mb.side_dofs[0];
    const auto& Q = mb.side_dofs[1];
    const auto& F = mb.frac_dofs;
    add_mf(P, P, mb.mass, opt.xi / den);
    add_mf(Q, Q, mb.mass, opt.xi / den);
    add_mf(P, Q, mb.mass, (1.0 - opt.xi) / den);
    add_mf(Q, P, mb.mass, (1.0 - opt.xi) / den);
    add_mf(P, F, mb.mass, -1.0 / den);
    add_mf(F, P, mb.mass, -1.0 / den);
    add_mf(Q, F, mb.mass, -1.0 / den);
    add_mf(F, Q, mb.mass, -1.0 / den);
    add_mf(F, F, mb.mass, 2.0 / den);

    if (opt.transmission_defect) {
      const int g = s.mesh().face_frac[mb.face];
      for (int side = 0; side < 2; ++side) {
        const Eigen::VectorXd w = s.face_pairing(mb.face, [&](const Vector3d& x) {
          return transmission_defect(cs, g, side, x);
        });
        for (int k = 0; k < w.size(); ++k) {
          sys.b[mb.side_dofs[side][k]] -= w[k];
          sys.b[mb.frac_dofs[k]] += w[k];
        }
      }
    }
  });

  for (int i = 0; i < n; ++i) {
    if (!sys.dirichlet[i]) continue;
    trip.push_back({i, i, 1.0});
    sys.b[i] = exact[i];
  }

  sys.full = csr_from_triplets(n, trip);
  trip.clear();
  trip.shrink_to_fit();

  // Partition: cell rows feed the elimination records, retained rows the
  // reduced system. Symmetry supplies the retained-to-cell couplings.
  std::vector<Triplet> tff;
  for (int i = 0; i < n; ++i) {
    for (int k = sys.full.row_ptr[i]; k < sys.full.row_ptr[i + 1]; ++k) {
      const int j = sys.full.col[k];
      const double a = sys.full.val[k];
      if (i < nc) {
        assert((j >= nc || j == i) && "cells must not couple to each other");
        if (j == i)
          sys.cells[i].diag = a;
        else
          sys.cells[i].off.emplace_back(j, a);
      } else if (j >= nc) {
        tff.push_back({i - nc, j - nc, a});
      }
    }
  }
  for (int c = 0; c < nc; ++c) sys.cells[c].b = sys.b[c];

  const int nred = n - nc;
  const int nnz_restriction = static_cast<int>(tff.size());

  sys.b_reduced = sys.b.tail(nred);
  for (int c = 0; c < nc; ++c) {
    const CellRecord& rec = sys.cells[c];
    assert(rec.diag != 0.0);
    for (const auto& [ji, ai] : rec.off) {
      sys.b_reduced[ji - nc] -= ai * rec.b / rec.diag;
      for (const auto& [jj, aj] : rec.off)
        tff.push_back({ji - nc, jj - nc, -ai * aj / rec.diag});
    }
  }
  sys.reduced = csr_from_triplets(nred, tff);
  if (sys.reduced.nnz() != nnz_restriction)
    throw std::logic_error("cell elimination introduced fill-in");
  return sys;
}

Eigen::VectorXd expand_solution(const AssembledSystem& sys, const Eigen::VectorXd& x_reduced)
{
  const int nc = static_cast<int>(sys.cells.size());
  const int n = static_cast<int>(sys.b.size());
  Eigen::VectorXd u(n);
  u.tail(n - nc) = x_reduced;
  for (int c = 0; c < nc; ++c) {
    const CellRecord& rec = sys.cells[c];
    double acc = rec.b;
    for (const auto& [j, a] : rec.off) acc -= a * u[j];
    u[c] = acc / rec.diag;
  }
  return u;
}

double conservation_residual(const AssembledSystem& sys, const Eigen::VectorXd& u)
{
  const Eigen::VectorXd r = sys.full.multiply(u) - sys.b;
  return r.cwiseAbs().maxCoeff() / sys.b.cwiseAbs().maxCoeff();
}

SolveResult solve_system(const Scheme& s, const AssembledSystem& sys, const SolveOptions& opt)
{
  (void)s;
  SolveResult res;
  const IlutFactors P = ilut_factor(sys.reduced, opt.ilut_tau);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.b_reduced.size());
  const SolveReport rep = gmres_solve(sys.reduced, P, sys.b_reduced, x, opt.rtol, opt.max_iter);
  res.iterations = rep.iterations;
  res.converged = rep.converged;
  res.residual =
      (sys.b_reduced - sys.reduced.multiply(x)).norm() / std::max(sys.b_reduced.norm(), 1e-300);
  res.u = expand_solution(sys, x);
  res.conservation = conservation_residual(sys, res.u);
  return res;
}

void write_matrix_market(const CsrMatrix& A, const std::string& path)
{
  std::ofstream out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n << " " << A.n << " " << A.nnz() << "\n";
  out.precision(16);
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      out << i + 1 << " " << A.col[k] + 1 << " " << A.val[k] << "\n";
}

} // namespace dfm
