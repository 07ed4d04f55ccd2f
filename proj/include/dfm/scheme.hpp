// Common interface of the gradient discretizations. A scheme owns the
// degree-of-freedom layout over a mesh and produces local symmetric blocks
// (cell, fracture-face, and matrix-fracture coupling), source vectors, and
// the reconstruction evaluators the error norms need. Assembly and error
// computation are scheme-agnostic on top of this interface.

#ifndef DFM_SCHEME_HPP
#define DFM_SCHEME_HPP

#include <dfm/mesh.hpp>
#include <dfm/model.hpp>

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dfm
{

/// Degree-of-freedom numbering. Cell dofs always occupy [0, n_cells),
/// matrix dofs [0, n_matrix), fracture dofs the rest; the fracture-face dof
/// of fracture face index ffi is always n_matrix + ffi.
struct DofLayout
{
  int n_cells = 0;
  int n_matrix = 0;
  int n_total = 0;
  std::vector<char> dirichlet;      ///< per dof, 1 if pinned to boundary data
  std::vector<Vector3d> position;   ///< anchor point of each dof
  int n_fracture() const { return n_total - n_matrix; }
};

/// Symmetric local contribution over a cluster of dofs. Blocks produced per
/// cell list the cell dof first.
struct LocalBlock
{
  std::vector<int> dofs;
  Eigen::MatrixXd A;
};

/// Matrix-fracture coupling data of one fracture face. The three dof lists
/// are aligned: entry i of each refers to the same interface basis function
/// phi_i, and mass(i,j) = \int_sigma T_f phi_i phi_j dtau. Side 0 is the
/// cell on the negative side of the fracture plane.
struct MfBlock
{
  int face = -1;
  std::array<std::vector<int>, 2> side_dofs;
  std::vector<int> frac_dofs;
  Eigen::MatrixXd mass;
};

/// Squared L2 integrals of the reconstruction errors, accumulated by
/// quadrature against the reference solution. Jump terms are kept per
/// (wing, side); index 2 g + side.
struct QuadratureErrors
{
  double sol_num_m = 0, sol_den_m = 0;
  double sol_num_f = 0, sol_den_f = 0;
  double grad_num_m = 0, grad_den_m = 0;
  double grad_num_f = 0, grad_den_f = 0;
  std::array<double, 8> jump_num{};
  std::array<double, 8> jump_den_plus{};
  std::array<double, 8> jump_den_minus{};
};

class Scheme
{
public:
  virtual ~Scheme() = default;

  virtual std::string name() const = 0;
  virtual const Mesh& mesh() const = 0;
  virtual const DofLayout& layout() const = 0;

  /// Local stiffness blocks; the callback may be invoked in any order.
  virtual void for_each_cell_block(const std::function<void(const LocalBlock&)>& fn) const = 0;
  virtual void for_each_fracture_block(const std::function<void(const LocalBlock&)>& fn) const = 0;
  virtual void for_each_mf_block(const std::function<void(const MfBlock&)>& fn) const = 0;

  /// Problem data the scheme was built for.
  virtual const Case& problem() const = 0;

  /// Reference solution evaluated at every dof anchor (used for Dirichlet
  /// data and for interpolation tests).
  virtual Eigen::VectorXd exact_dof_values() const = 0;

  /// Adds the discrete sources \int h_m Pi e_nu + \int d_f h_f Pi_f e_nu.
  virtual void add_sources(Eigen::VectorXd& rhs) const = 0;

  /// Integrals \int_sigma r phi_i dtau of a density against the interface
  /// basis of one fracture face, aligned with the MfBlock dof lists.
  virtual Eigen::VectorXd face_pairing(int face,
                                       const std::function<double(const Vector3d&)>& r) const = 0;

  /// Subtracts the line source \int_Sigma q v_f along the fracture
  /// intersection: rhs[i] -= \int q phi_i for the fracture dofs active there.
  virtual void add_sigma_source(const std::function<double(const Vector3d&)>& q,
                                Eigen::VectorXd& rhs) const = 0;

  /// Matrix trace dof of the given side of fracture face index ffi.
  virtual int side_trace_dof(int ffi, int side) const = 0;

  /// Mean discrete gradient of a cell / tangential gradient of a fracture
  /// face (3D vector in the fracture plane).
  virtual Vector3d cell_gradient(int c, const Eigen::VectorXd& u) const = 0;
  virtual Vector3d fracture_gradient(int ffi, const Eigen::VectorXd& u) const = 0;

  /// L2 errors of the scheme's own reconstructions by quadrature;
  /// refine > 0 subdivides every rule once per level (self-check).
  virtual QuadratureErrors quadrature_errors(const Eigen::VectorXd& u, int refine) const = 0;

  int fracture_face_dof(int ffi) const { return layout().n_matrix + ffi; }
};

enum class SchemeKind { vag_fe, vag_cv, hfv };

std::unique_ptr<Scheme> make_scheme(SchemeKind kind, const Mesh& m, const Case& cs);

} // namespace dfm

#endif
