// Closed-form reference solution family and source terms. The matrix pressure
// in each quadrant is a z-profile times the two adjacent wing pressures; the
// family constants are chosen so that the xi = 1 transmission conditions hold
// wherever the permeability compatibility ratio allows it.

#include <dfm/model.hpp>

#include <numbers>

namespace dfm
{

namespace
{

constexpr double pi = std::numbers::pi;

template <class J>
J alpha_f(const J& z)
{
  return exp(sin(z * pi));
}

// beta_12; constant, but kept as a function of z so the family stays generic.
template <class J>
J beta(const J& /*z*/)
{
  return J::constant(-1.0);
}

// Wing profiles with gamma(0) = 0 and gamma'(0) = 1.
template <class J>
J gamma_profile(int g, const J& t)
{
  switch (g) {
  case g12: return cos(t * (2.0 * pi)) + t - 1.0;
  case g23: return t;
  case g34: return -exp(cos(t * pi)) + t + std::numbers::e;
  default: return sin(t * pi) / pi;
  }
}

template <class J>
J wing_pressure(const Case& cs, int g, const J& t, const J& z)
{
  return alpha_f(z) + cs.c[g] * (beta(z) * gamma_profile(g, t));
}

template <class J>
J quadrant_profile(const Case& cs, int omega, const J& z)
{
  return inverse(alpha_f(z) - cs.a[omega - 1] * beta(z));
}

// Wings adjacent to each quadrant: one in the plane x = 0 evaluated along y,
// one in the plane y = 0 evaluated along x.
constexpr int xplane_wing[4] = {g12, g12, g34, g34};
constexpr int yplane_wing[4] = {g14, g23, g23, g14};

template <class J>
J matrix_pressure(const Case& cs, int omega, const J& x, const J& y, const J& z)
{
  return quadrant_profile(cs, omega, z) * wing_pressure(cs, xplane_wing[omega - 1], y, z) *
         wing_pressure(cs, yplane_wing[omega - 1], x, z);
}

} // namespace

void derive_constants(Case& cs)
{
  const double k1x = cs.K[0].x(), k1y = cs.K[0].y();
  const double k2x = cs.K[1].x();
  const double k3x = cs.K[2].x(), k3y = cs.K[2].y();
  const double k4x = cs.K[3].x(), k4y = cs.K[3].y();
  const double t12 = cs.T[g12], t23 = cs.T[g23], t34 = cs.T[g34], t14 = cs.T[g14];

  cs.a[0] = k1y / t14;
  cs.a[1] = k1y * k2x * k3y * k4x / (k1x * k3x * k4y * t23);
  cs.a[2] = k1y * k3y * k4x * t12 / (k1x * k4y * t23 * t34);
  cs.a[3] = k1y * k4x * t12 / (k1x * t14 * t34);

  cs.c[g12] = 1.0;
  cs.c[g23] = k1y * k3y * k4x * t12 / (k1x * k3x * k4y * t23);
  cs.c[g34] = -k1y * k4x * t12 / (k1x * k4y * t34);
  cs.c[g14] = -k1y * t12 / (k1x * t14);
}

Case isotropic_case()
{
  Case cs;
  cs.K[0] = Vector3d::Constant(1.0);
  cs.K[1] = Vector3d::Constant(100.0);
  cs.K[2] = Vector3d::Constant(3.0);
  cs.K[3] = Vector3d::Constant(40.0);
  cs.T = {1.0, 0.2, 100.0, 10.0};
  cs.Kf = {1.0, 2.0, 3.0, 10.0};
  derive_constants(cs);
  return cs;
}

Case anisotropic_case()
{
  Case cs;
  cs.K[0] = Vector3d(1.0, 50.0, 1.0);
  cs.K[1] = Vector3d(2.0, 100.0, 2.0);
  cs.K[2] = Vector3d(30.0, 3.0, 3.0);
  cs.K[3] = Vector3d(40.0, 40.0, 4.0);
  cs.T = {1.0, 1.0, 1.0, 1.0};
  cs.Kf = {1.0, 1.0, 1.0, 1.0};
  derive_constants(cs);
  return cs;
}

Jet3 matrix_jet(const Case& cs, int omega, const Vector3d& p)
{
  const Jet3 x = Jet3::variable(p.x(), 0), y = Jet3::variable(p.y(), 1),
             z = Jet3::variable(p.z(), 2);
  return matrix_pressure(cs, omega, x, y, z);
}

double matrix_value(const Case& cs, int omega, const Vector3d& p)
{
  return matrix_jet(cs, omega, p).v;
}

Vector3d matrix_gradient(const Case& cs, int omega, const Vector3d& p)
{
  return matrix_jet(cs, omega, p).g;
}

Jet2 fracture_jet(const Case& cs, int g, double t, double z)
{
  return wing_pressure(cs, g, Jet2::variable(t, 0), Jet2::variable(z, 1));
}

double fracture_value(const Case& cs, int g, const Vector3d& p)
{
  return fracture_jet(cs, g, p[frac_tangent_axis(g)], p.z()).v;
}

Vector3d fracture_gradient3(const Case& cs, int g, const Vector3d& p)
{
  const Jet2 j = fracture_jet(cs, g, p[frac_tangent_axis(g)], p.z());
  Vector3d grad = Vector3d::Zero();
  grad[frac_tangent_axis(g)] = j.g(0);
  grad.z() = j.g(1);
  return grad;
}

double matrix_source(const Case& cs, int omega, const Vector3d& p)
{
  const Jet3 j = matrix_jet(cs, omega, p);
  const Vector3d& k = cs.K[omega - 1];
  return -(k.x() * j.h(0, 0) + k.y() * j.h(1, 1) + k.z() * j.h(2, 2));
}

double normal_flux(const Case& cs, int g, int side, const Vector3d& p)
{
  const int omega = frac_side_subdomain(g, side);
  const int axis = frac_normal_axis(g);
  const double n_sign = side == 0 ? 1.0 : -1.0;
  const Jet3 j = matrix_jet(cs, omega, p);
  return -cs.K[omega - 1][axis] * j.g(axis) * n_sign;
}

double transmission_expr(const Case& cs, int g, int side, const Vector3d& p)
{
  const double u_this = matrix_value(cs, frac_side_subdomain(g, side), p);
  const double u_other = matrix_value(cs, frac_side_subdomain(g, 1 - side), p);
  const double u_f = fracture_value(cs, g, p);
  return cs.T[g] / (2.0 * cs.xi - 1.0) *
         (cs.xi * u_this + (1.0 - cs.xi) * u_other - u_f);
}

double transmission_defect(const Case& cs, int g, int side, const Vector3d& p)
{
  return normal_flux(cs, g, side, p) - transmission_expr(cs, g, side, p);
}

double fracture_source(const Case& cs, int g, const Vector3d& p)
{
  const Jet2 j = fracture_jet(cs, g, p[frac_tangent_axis(g)], p.z());
  const double lap = j.h(0, 0) + j.h(1, 1);
  const double inflow = normal_flux(cs, g, 0, p) + normal_flux(cs, g, 1, p);
  return (-cs.d_f * cs.Kf[g] * lap - inflow) / cs.d_f;
}

double sigma_outflow(const Case& cs, double z)
{
  double q = 0.0;
  for (int g = 0; g < 4; ++g) {
    const Jet2 j = fracture_jet(cs, g, 0.0, z);
    q += frac_wing_sign(g) * cs.d_f * cs.Kf[g] * j.g(0);
  }
  return q;
}

} // namespace dfm
