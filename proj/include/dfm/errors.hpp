// Error norms of a discrete solution against the closed-form reference:
// discrete (dof-based) relative L2 norms of the solution, the gradient and
// the interface jump, plus quadrature-based variants using each scheme's
// reconstruction, and the convergence order helper and CSV table output.

#ifndef DFM_ERRORS_HPP
#define DFM_ERRORS_HPP

#include <dfm/scheme.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dfm
{

struct ErrorReport
{
  double sol = 0;
  double grad = 0;
  double jump = 0;
  double sol_q = 0;
  double grad_q = 0;
  double jump_q = 0;
  double jump_abs = 0; ///< unnormalized L2 magnitude of the computed jump
};

/// Normalization of the jump error: sum or difference of the interface
/// traces in the denominator.
enum class JumpDenominator { plus, minus };

ErrorReport compute_errors(const Scheme& s, const Eigen::VectorXd& u,
                           JumpDenominator jd = JumpDenominator::plus, int refine = 0);

/// Order between two refinement levels from cell counts:
/// log(e_coarse / e_fine) / log((n_fine / n_coarse)^(1/3)).
double convergence_order(double e_coarse, double e_fine, int cells_coarse, int cells_fine);

struct StudyRow
{
  std::string mesh;
  std::string scheme;
  std::string problem;
  int cells = 0;
  int dofs = 0;
  double h_T = 0;
  int iterations = 0;
  double cpu_seconds = 0;
  ErrorReport err;
  double alpha_sol = 0;
  double alpha_grad = 0;
  double alpha_jump = 0;
};

void write_csv(const std::vector<StudyRow>& rows, std::ostream& out);

} // namespace dfm

#endif
