// Single-phase Darcy flow in the fractured unit cube, with a closed-form
// reference solution. The matrix pressure is discontinuous across the four
// fracture wings; across each wing the normal flux obeys a Robin-type
// transmission condition with parameter xi in (1/2, 1]:
//   flux out of side alpha = T_f/(2 xi - 1) (xi tr_a u + (1-xi) tr_b u - u_f).
// The reference family satisfies all transmission conditions exactly at
// xi = 1 whenever the permeability compatibility ratio equals one; any
// residual (other xi, or incompatible anisotropy) is exposed pointwise so the
// right-hand side can compensate for it.

#ifndef DFM_MODEL_HPP
#define DFM_MODEL_HPP

#include <dfm/jet.hpp>
#include <dfm/mesh.hpp>

#include <array>

namespace dfm
{

/// Fracture wings, numbered counterclockwise starting at {x=0, y>0}.
enum Frac { g12 = 0, g23 = 1, g34 = 2, g14 = 3 };

/// In-plane tangential axis of the wing (the second one is always z).
inline int frac_tangent_axis(int g) { return (g == g12 || g == g34) ? 1 : 0; }

/// Axis normal to the wing's plane.
inline int frac_normal_axis(int g) { return (g == g12 || g == g34) ? 0 : 1; }

/// +1 if the wing occupies the positive tangential half-plane.
inline int frac_wing_sign(int g) { return (g == g12 || g == g23) ? 1 : -1; }

/// Subdomain (1..4) on the given side of the wing's plane;
/// side 0 = negative half-space of the normal axis, side 1 = positive.
inline int frac_side_subdomain(int g, int side)
{
  static constexpr int tab[4][2] = {{1, 2}, {3, 2}, {4, 3}, {4, 1}};
  return tab[g][side];
}

/// Quadrant subdomain 1..4 containing a point off the fracture planes.
inline int subdomain_of(const Vector3d& p)
{
  if (p.x() < 0.0) return p.y() > 0.0 ? 1 : 4;
  return p.y() > 0.0 ? 2 : 3;
}

/// Wing index of a point on one of the fracture planes (Sigma maps to g12).
inline int fracture_of(const Vector3d& p)
{
  if (std::abs(p.x()) <= geom_eps) return p.y() >= 0.0 ? g12 : g34;
  return p.x() > 0.0 ? g23 : g14;
}

/// Problem data and the derived constants of the reference solution family.
struct Case
{
  std::array<Vector3d, 4> K;  ///< diagonal matrix permeability per subdomain
  std::array<double, 4> T;    ///< normal fracture transmissivity per wing
  std::array<double, 4> Kf;   ///< tangential fracture permeability per wing
  double d_f = 1.0;           ///< fracture aperture
  double xi = 1.0;

  std::array<double, 4> a;    ///< z-profile shifts per subdomain
  std::array<double, 4> c;    ///< wing amplitudes, c[g12] = 1

  /// Ratio that must equal 1 for the family to satisfy all transmission
  /// conditions at xi = 1.
  double compat_ratio() const
  {
    return K[0].y() * K[1].x() * K[2].y() * K[3].x() /
           (K[0].x() * K[1].y() * K[2].x() * K[3].y());
  }
};

/// Heterogeneous isotropic benchmark configuration.
Case isotropic_case();

/// Anisotropic benchmark configuration (compatibility ratio 0.1).
Case anisotropic_case();

/// Derive the family constants from K and T. Called by the case builders;
/// call again after modifying K or T in place.
void derive_constants(Case& cs);

/// Reference matrix pressure in subdomain omega (1..4); the closed form is
/// smooth, so evaluating it on the subdomain closure yields the trace.
Jet3 matrix_jet(const Case& cs, int omega, const Vector3d& p);
double matrix_value(const Case& cs, int omega, const Vector3d& p);
Vector3d matrix_gradient(const Case& cs, int omega, const Vector3d& p);

/// Reference fracture pressure on wing g in (tangential, z) coordinates.
Jet2 fracture_jet(const Case& cs, int g, double t, double z);
double fracture_value(const Case& cs, int g, const Vector3d& p);
/// In-plane gradient embedded in 3D (zero normal component).
Vector3d fracture_gradient3(const Case& cs, int g, const Vector3d& p);

/// Matrix source h_m = -div(K grad u) in subdomain omega.
double matrix_source(const Case& cs, int omega, const Vector3d& p);

/// Normal flux -K grad u . n out of the side subdomain into wing g,
/// evaluated from the reference solution at a point of the plane.
double normal_flux(const Case& cs, int g, int side, const Vector3d& p);

/// Transmission expression T_f/(2xi-1)(xi tr_side u + (1-xi) tr_other u - u_f).
double transmission_expr(const Case& cs, int g, int side, const Vector3d& p);

/// Residual of the transmission condition: normal_flux minus
/// transmission_expr. Zero for compatible data at xi = 1.
double transmission_defect(const Case& cs, int g, int side, const Vector3d& p);

/// Fracture source h_f from the in-fracture balance
/// div_tau(q_f) - (flux in from both sides) = d_f h_f.
double fracture_source(const Case& cs, int g, const Vector3d& p);

/// Total tangential outflow of the four wings through the intersection line
/// x = y = 0, per unit length, at height z. The reference family does not
/// conserve mass across the line, so this enters the right-hand side.
double sigma_outflow(const Case& cs, double z);

} // namespace dfm

#endif
