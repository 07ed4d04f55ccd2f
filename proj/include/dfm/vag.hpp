// Vertex Approximate Gradient scheme. Unknowns live at cells, at vertex
// equivalence classes (one per connected component of cells around a vertex
// not crossing the fracture network), at per-side fracture-face traces, and
// at fracture faces and vertices. Gradients are P1 on the tetrahedral
// submesh; the fe mode reconstructs conforming P1 functions, the cv mode
// piecewise constants (lumped sources and diagonal mf coupling).

#ifndef DFM_VAG_HPP
#define DFM_VAG_HPP

#include <dfm/scheme.hpp>

namespace dfm
{

enum class VagMode { fe, cv };

class VagScheme : public Scheme
{
public:
  VagScheme(const Mesh& m, const Case& cs, VagMode mode);

  std::string name() const override { return mode_ == VagMode::fe ? "vag-fe" : "vag-cv"; }
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

  int side_trace_dof(int ffi, int side) const override { return trace_dof(ffi, side); }
  Vector3d cell_gradient(int c, const Eigen::VectorXd& u) const override;
  Vector3d fracture_gradient(int ffi, const Eigen::VectorXd& u) const override;
  QuadratureErrors quadrature_errors(const Eigen::VectorXd& u, int refine) const override;

  // Layout: cells, then two trace dofs per fracture face, then classes,
  // then fracture faces, then fracture vertices.
  int cell_dof(int c) const { return c; }
  int trace_dof(int ffi, int side) const { return layout_.n_cells + 2 * ffi + side; }
  int class_dof(int cid) const { return layout_.n_cells + 2 * n_frac_faces_ + cid; }
  int vertex_dof(int vfi) const { return layout_.n_matrix + n_frac_faces_ + vfi; }

  const VertexClasses& classes() const { return classes_; }

  /// Side (0 = negative half-space of the fracture plane) cell c sees of
  /// fracture face f.
  int side_of(int f, int c) const;

private:
  struct CellCtx
  {
    std::vector<int> dofs;            // global ids, dofs[0] is the cell
    std::vector<int> face_trace_loc;  // per cell-face slot, local index or -1
    int nv = 0;
  };
  CellCtx cell_ctx(int c) const;

  // Distribution of a sub-tet node onto local cell dofs.
  struct NodeW
  {
    int n = 0;
    int loc[8];
    double w[8];
  };
  void node_weights(const CellCtx& ctx, int c, int f, int face_slot, int s0, int s1,
                    NodeW out[4]) const;

  const Mesh* m_;
  Case case_;
  VagMode mode_;
  VertexClasses classes_;
  DofLayout layout_;
  int n_frac_faces_ = 0;
  std::vector<int> vert_wing_;  // representative wing per fracture vertex
};

} // namespace dfm

#endif
