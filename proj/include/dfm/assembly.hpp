// System assembly: gathers scheme blocks into a symmetric sparse system,
// substitutes Dirichlet values, adds the intersection outflow and the
// interface compensation of the reference solution, then eliminates the
// cell unknowns through a fill-in free Schur complement.

#ifndef DFM_ASSEMBLY_HPP
#define DFM_ASSEMBLY_HPP

#include <dfm/scheme.hpp>
#include <dfm/solver.hpp>

#include <string>

namespace dfm
{

/// Treatment of the outflow along the fracture intersection line.
enum class SigmaMode { line_source, dirichlet_pin, none };

struct AssemblyOptions
{
  double xi = 1.0;              ///< coupling parameter, must exceed 1/2
  SigmaMode sigma_mode = SigmaMode::line_source;
  bool transmission_defect = true; ///< compensate the interface defect of the
                                   ///< reference solution (vanishes in the
                                   ///< isotropic case)
};

/// Eliminated row of one cell: diagonal, couplings to retained dofs, rhs.
struct CellRecord
{
  double diag = 0;
  std::vector<std::pair<int, double>> off;
  double b = 0;
};

struct AssembledSystem
{
  CsrMatrix full;               ///< all dofs, Dirichlet rows replaced by identity
  Eigen::VectorXd b;
  std::vector<char> dirichlet;  ///< effective flags, including pinned dofs
  std::vector<CellRecord> cells;
  CsrMatrix reduced;            ///< retained dofs, indexed by global id minus n_cells
  Eigen::VectorXd b_reduced;
};

AssembledSystem assemble_system(const Scheme& s, const AssemblyOptions& opt);

/// Back substitution of the eliminated cell unknowns into a full dof vector.
Eigen::VectorXd expand_solution(const AssembledSystem& sys, const Eigen::VectorXd& x_reduced);

/// max_i |(A u - b)_i| / ||b||_inf over the full system.
double conservation_residual(const AssembledSystem& sys, const Eigen::VectorXd& u);

struct SolveOptions
{
  double rtol = 1e-10;
  double ilut_tau = 1e-4;
  int max_iter = 2000;
};

struct SolveResult
{
  Eigen::VectorXd u;        ///< full dof vector after cell recovery
  int iterations = 0;
  double residual = 0;      ///< reduced-system relative residual, recomputed
  double conservation = 0;  ///< full-system residual of the expanded solution
  bool converged = false;
};

SolveResult solve_system(const Scheme& s, const AssembledSystem& sys, const SolveOptions& opt);

/// Coordinate MatrixMarket output.
void write_matrix_market(const CsrMatrix& A, const std::string& path);

} // namespace dfm

#endif
