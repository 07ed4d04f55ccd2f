// Fixed quadrature rules: degree-4 on tetrahedra (11-point Keast) and triangles
// (6-point Dunavant), 3-point Gauss on segments. A refinement level subdivides
// the element (tet octasection, triangle quadrisection) and reapplies the rule,
// which is how integration accuracy is self-checked.

#ifndef DFM_QUADRATURE_HPP
#define DFM_QUADRATURE_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>

namespace dfm
{

using Eigen::Vector3d;
using Eigen::Vector4d;

namespace quad_detail
{

struct TetPoint
{
  double w;        // weight, normalized so weights sum to 1
  Vector4d lambda; // barycentric coordinates
};

inline const std::array<TetPoint, 11>& tet_rule()
{
  static const std::array<TetPoint, 11> rule = [] {
    std::array<TetPoint, 11> r{};
    const double wc = -444.0 / 5625.0;
    const double w4 = 343.0 / 7500.0;
    const double w6 = 56.0 / 375.0;
    const double p = 11.0 / 14.0, q = 1.0 / 14.0;
    const double s = std::sqrt(5.0 / 14.0);
    const double a = (1.0 + s) / 4.0, b = (1.0 - s) / 4.0;
    int k = 0;
    r[k++] = {wc, Vector4d(0.25, 0.25, 0.25, 0.25)};
    for (int i = 0; i < 4; ++i) {
      Vector4d l(q, q, q, q);
      l(i) = p;
      r[k++] = {w4, l};
    }
    const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (auto& pr : pairs) {
      Vector4d l(b, b, b, b);
      l(pr[0]) = a;
      l(pr[1]) = a;
      r[k++] = {w6, l};
    }
    return r;
  }();
  return rule;
}

struct TriPoint
{
  double w;
  Vector3d lambda;
};

inline const std::array<TriPoint, 6>& tri_rule()
{
  static const std::array<TriPoint, 6> rule = [] {
    std::array<TriPoint, 6> r{};
    const double w1 = 0.223381589678011, a1 = 0.445948490915965;
    const double w2 = 0.109951743655322, a2 = 0.091576213509771;
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      Vector3d l(a1, a1, a1);
      l(i) = 1.0 - 2.0 * a1;
      r[k++] = {w1, l};
    }
    for (int i = 0; i < 3; ++i) {
      Vector3d l(a2, a2, a2);
      l(i) = 1.0 - 2.0 * a2;
      r[k++] = {w2, l};
    }
    return r;
  }();
  return rule;
}

} // namespace quad_detail

inline double tet_volume(const Vector3d& a, const Vector3d& b, const Vector3d& c, const Vector3d& d)
{
  return std::abs((b - a).cross(c - a).dot(d - a)) / 6.0;
}

inline double tri_area(const Vector3d& a, const Vector3d& b, const Vector3d& c)
{
  return 0.5 * (b - a).cross(c - a).norm();
}

/// Integrate f(x, lambda) over the tetrahedron (a,b,c,d); f receives the physical
/// point and its barycentric coordinates with respect to the *original* vertices.
template <class F>
double integrate_tet(const Vector3d& a, const Vector3d& b, const Vector3d& c, const Vector3d& d,
                     F&& f, int refine = 0)
{
  if (refine > 0) {
    const Vector3d mab = 0.5 * (a + b), mac = 0.5 * (a + c), mad = 0.5 * (a + d);
    const Vector3d mbc = 0.5 * (b + c), mbd = 0.5 * (b + d), mcd = 0.5 * (c + d);
    double acc = 0.0;
    acc += integrate_tet(a, mab, mac, mad, f, refine - 1);
    acc += integrate_tet(mab, b, mbc, mbd, f, refine - 1);
    acc += integrate_tet(mac, mbc, c, mcd, f, refine - 1);
    acc += integrate_tet(mad, mbd, mcd, d, f, refine - 1);
    acc += integrate_tet(mac, mbd, mab, mad, f, refine - 1);
    acc += integrate_tet(mac, mbd, mad, mcd, f, refine - 1);
    acc += integrate_tet(mac, mbd, mcd, mbc, f, refine - 1);
    acc += integrate_tet(mac, mbd, mbc, mab, f, refine - 1);
    return acc;
  }

  const double vol = tet_volume(a, b, c, d);
  // Map physical points back to barycentrics of the original simplex so that
  // P1 shape functions stay meaningful under subdivision.
  Eigen::Matrix3d M;
  M.col(0) = b - a;
  M.col(1) = c - a;
  M.col(2) = d - a;
  const Eigen::Matrix3d Minv = M.inverse();

  double acc = 0.0;
  for (const auto& qp : quad_detail::tet_rule()) {
    const Vector3d x = qp.lambda(0) * a + qp.lambda(1) * b + qp.lambda(2) * c + qp.lambda(3) * d;
    const Vector3d y = Minv * (x - a);
    Vector4d lam(1.0 - y.sum(), y(0), y(1), y(2));
    acc += qp.w * f(x, lam);
  }
  return acc * vol;
}

/// Same for a triangle embedded in 3D.
template <class F>
double integrate_tri(const Vector3d& a, const Vector3d& b, const Vector3d& c, F&& f, int refine = 0)
{
  if (refine > 0) {
    const Vector3d mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
    return integrate_tri(a, mab, mca, f, refine - 1) + integrate_tri(mab, b, mbc, f, refine - 1) +
           integrate_tri(mca, mbc, c, f, refine - 1) + integrate_tri(mab, mbc, mca, f, refine - 1);
  }

  const double area = tri_area(a, b, c);
  const Vector3d e1 = b - a, e2 = c - a;
  Eigen::Matrix2d G;
  G << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Eigen::Matrix2d Ginv = G.inverse();

  double acc = 0.0;
  for (const auto& qp : quad_detail::tri_rule()) {
    const Vector3d x = qp.lambda(0) * a + qp.lambda(1) * b + qp.lambda(2) * c;
    const Vector3d d = x - a;
    const Eigen::Vector2d y = Ginv * Eigen::Vector2d(e1.dot(d), e2.dot(d));
    Vector3d lam(1.0 - y.sum(), y(0), y(1));
    acc += qp.w * f(x, lam);
  }
  return acc * area;
}

/// 3-point Gauss on the segment [a,b]; f receives the physical point.
template <class F>
double integrate_segment(const Vector3d& a, const Vector3d& b, F&& f)
{
  const double s = std::sqrt(3.0 / 5.0);
  const double t[3] = {-s, 0.0, s};
  const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double len = (b - a).norm();
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vector3d x = 0.5 * (a + b) + 0.5 * t[i] * (b - a);
    acc += w[i] * f(x);
  }
  return acc * 0.5 * len;
}

} // namespace dfm

#endif
