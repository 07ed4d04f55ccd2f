// Hybrid finite volume scheme. Matrix unknowns live at cells and faces
// (fracture faces carry one unknown per side), fracture unknowns at
// fracture faces and fracture edges. Cell gradients are the standard
// face-flux reconstruction with a per-cone stabilization.

#ifndef DFM_HFV_HPP
#define DFM_HFV_HPP

#include <dfm/scheme.hpp>

namespace dfm
{

class HfvScheme : public Scheme
{
public:
  HfvScheme(const Mesh& m, const Case& cs);

  std::string name() const override { return "hfv"; }
  const Mesh& mesh() const override { return *m_; }
  const DofLayout& layout() const override { return layout_; }
  const Case& problem() const override { return case_; }

  void for_each_cell_block(const std::function<void(const LocalBlock&)>& fn) const override;
  void for_each_fracture_block(const std::function<void(const LocalBlock&)>& fn) const override;
  void for_each_mf_block(const std::function<void(const MfBlock&)>& fn) const override;

  Eigen::VectorXd exact_dof_values() const override;
  void add_sources(Eigen::VectorXd& rhs) const override;
  Eigen::VectorXd face_pairing(int face,
                               const std::function<double(const Vector3d&)>& r) const override;
  void add_sigma_source(const std::function<double(const Vector3d&)>& q,
                        Eigen::VectorXd& rhs) const override;

  int side_trace_dof(int ffi, int side) const override
  {
    return face_dof_[m_->frac_faces[ffi]] + side;
  }
  Vector3d cell_gradient(int c, const Eigen::VectorXd& u) const override;
  Vector3d fracture_gradient(int ffi, const Eigen::VectorXd& u) const override;
  QuadratureErrors quadrature_errors(const Eigen::VectorXd& u, int refine) const override;

  // Layout: cells, then face unknowns (two consecutive for a fracture face,
  // lower half-space side first), then fracture faces, then fracture edges.
  int face_dof(int f, int side = 0) const { return face_dof_[f] + side; }
  int edge_dof(int efi) const { return layout_.n_matrix + n_frac_faces_ + efi; }

  /// Side (0 = negative half-space of the fracture plane) cell c sees of
  /// fracture face f.
  int side_of(int f, int c) const;

private:
  // Cone geometry and the discrete gradient operator of one cell or one
  // fracture face: gradient matrix G (3 x ndof) and per-cone stabilized
  // rows; assembled on demand.
  struct ConeOp
  {
    std::vector<int> dofs;          // global ids, dofs[0] is the cell/face
    Eigen::Matrix3Xd G;             // discrete gradient
    std::vector<Eigen::Matrix3Xd> M;  // per cone: G + n r^T
    std::vector<double> vol;        // cone measures
  };
  ConeOp cell_op(int c) const;
  ConeOp face_op(int ffi) const;

  const Mesh* m_;
  Case case_;
  DofLayout layout_;
  int n_frac_faces_ = 0;
  std::vector<int> face_dof_;   // first matrix unknown of each face
  std::vector<int> edge_wing_;  // representative wing per fracture edge
};

} // namespace dfm

#endif
