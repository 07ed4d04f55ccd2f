// Second-order forward-mode derivative arithmetic: value, gradient and Hessian
// propagated through arithmetic and elementary functions. Used to evaluate the
// closed-form reference solutions and their source terms exactly.

#ifndef DFM_JET_HPP
#define DFM_JET_HPP

#include <Eigen/Dense>
#include <cmath>

namespace dfm
{

/// Truncated second-order Taylor coefficient bundle in N variables.
template <typename Scalar, int N>
struct Jet
{
  Scalar v;                       ///< value
  Eigen::Matrix<Scalar, N, 1> g;  ///< gradient
  Eigen::Matrix<Scalar, N, N> h;  ///< Hessian (kept symmetric)

  Jet() : v(0), g(Eigen::Matrix<Scalar, N, 1>::Zero()), h(Eigen::Matrix<Scalar, N, N>::Zero()) {}

  static Jet constant(Scalar c)
  {
    Jet j;
    j.v = c;
    return j;
  }

  /// Seed for the i-th independent variable with value c.
  static Jet variable(Scalar c, int i)
  {
    Jet j;
    j.v = c;
    j.g(i) = Scalar(1);
    return j;
  }
};

template <typename S, int N>
Jet<S, N> operator+(const Jet<S, N>& a, const Jet<S, N>& b)
{
  Jet<S, N> r;
  r.v = a.v + b.v;
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}

template <typename S, int N>
Jet<S, N> operator-(const Jet<S, N>& a, const Jet<S, N>& b)
{
  Jet<S, N> r;
  r.v = a.v - b.v;
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}

template <typename S, int N>
Jet<S, N> operator-(const Jet<S, N>& a)
{
  Jet<S, N> r;
  r.v = -a.v;
  r.g = -a.g;
  r.h = -a.h;
  return r;
}

template <typename S, int N>
Jet<S, N> operator*(const Jet<S, N>& a, const Jet<S, N>& b)
{
  Jet<S, N> r;
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}

template <typename S, int N>
Jet<S, N> operator+(const Jet<S, N>& a, S c) { return a + Jet<S, N>::constant(c); }
template <typename S, int N>
Jet<S, N> operator+(S c, const Jet<S, N>& a) { return a + Jet<S, N>::constant(c); }
template <typename S, int N>
Jet<S, N> operator-(const Jet<S, N>& a, S c) { return a - Jet<S, N>::constant(c); }
template <typename S, int N>
Jet<S, N> operator-(S c, const Jet<S, N>& a) { return Jet<S, N>::constant(c) - a; }

template <typename S, int N>
Jet<S, N> operator*(const Jet<S, N>& a, S c)
{
  Jet<S, N> r;
  r.v = a.v * c;
  r.g = a.g * c;
  r.h = a.h * c;
  return r;
}
template <typename S, int N>
Jet<S, N> operator*(S c, const Jet<S, N>& a) { return a * c; }
template <typename S, int N>
Jet<S, N> operator/(const Jet<S, N>& a, S c) { return a * (S(1) / c); }

/// Chain rule for a scalar function with the first two derivatives at a.v.
template <typename S, int N>
Jet<S, N> compose(const Jet<S, N>& a, S f, S df, S ddf)
{
  Jet<S, N> r;
  r.v = f;
  r.g = df * a.g;
  r.h = df * a.h + ddf * (a.g * a.g.transpose());
  return r;
}

template <typename S, int N>
Jet<S, N> sin(const Jet<S, N>& a)
{
  using std::sin, std::cos;
  return compose(a, sin(a.v), cos(a.v), -sin(a.v));
}

template <typename S, int N>
Jet<S, N> cos(const Jet<S, N>& a)
{
  using std::sin, std::cos;
  return compose(a, cos(a.v), -sin(a.v), -cos(a.v));
}

template <typename S, int N>
Jet<S, N> exp(const Jet<S, N>& a)
{
  using std::exp;
  const S e = exp(a.v);
  return compose(a, e, e, e);
}

template <typename S, int N>
Jet<S, N> inverse(const Jet<S, N>& a)
{
  const S iv = S(1) / a.v;
  return compose(a, iv, -iv * iv, S(2) * iv * iv * iv);
}

template <typename S, int N>
Jet<S, N> operator/(const Jet<S, N>& a, const Jet<S, N>& b) { return a * inverse(b); }
template <typename S, int N>
Jet<S, N> operator/(S c, const Jet<S, N>& b) { return inverse(b) * c; }

using Jet2 = Jet<double, 2>;
using Jet3 = Jet<double, 3>;

} // namespace dfm

#endif
