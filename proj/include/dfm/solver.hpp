// Sparse linear algebra for the reduced systems: CSR storage, ILUT
// factorization with a relative threshold drop rule, and a right
// preconditioned GMRes without restart. The returned residual is always
// recomputed from the original matrix, never taken from the iteration.

#ifndef DFM_SOLVER_HPP
#define DFM_SOLVER_HPP

#include <Eigen/Dense>
#include <vector>

namespace dfm
{

struct CsrMatrix
{
  int n = 0;
  std::vector<int> row_ptr; ///< size n+1
  std::vector<int> col;     ///< sorted within each row
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  /// Stored value at (i, j), or 0.
  double coeff(int i, int j) const;

  Eigen::MatrixXd to_dense() const;
};

struct Triplet
{
  int row;
  int col;
  double value;
};

/// Assemble from (row, col, value) triplets; duplicates are summed.
CsrMatrix csr_from_triplets(int n, const std::vector<Triplet>& triplets);

/// Incomplete LU factors: L is unit lower triangular (unit diagonal not
/// stored), U is upper triangular including the diagonal.
struct IlutFactors
{
  CsrMatrix L, U;

  /// x := U^{-1} L^{-1} x
  void solve_in_place(Eigen::VectorXd& x) const;
};

/// ILUT in natural order without pivoting or fill cap. While eliminating
/// row i, an entry is dropped when its magnitude falls below
/// tau * ||row i of A||_2; the diagonal is always kept. tau = 0 yields an
/// exact LU factorization. Throws on a zero pivot.
IlutFactors ilut_factor(const CsrMatrix& A, double tau);

struct SolveReport
{
  int iterations = 0;
  double true_residual = 0; ///< ||b - A x|| / ||b||, recomputed unpreconditioned
  bool converged = false;
};

/// Full (non restarted) GMRes with right preconditioning, modified
/// Gram-Schmidt and Givens rotations. Iterates until the relative residual
/// estimate reaches rtol, then recomputes the true residual of the original
/// system and continues if the estimate was optimistic.
SolveReport gmres_solve(const CsrMatrix& A, const IlutFactors& P, const Eigen::VectorXd& b,
                        Eigen::VectorXd& x, double rtol, int max_iter);

} // namespace dfm

#endif
