// Derivative arithmetic checked against 4th-order central finite differences.

#include <catch2/catch_amalgamated.hpp>

#include <dfm/jet.hpp>

#include <cmath>
#include <random>

using dfm::Jet3;

namespace
{

// A composite with all the ingredients used by the reference solutions.
template <class T>
T value_of(const T& x, const T& y, const T& z)
{
  const double pi = M_PI;
  return exp(sin(pi * z)) * (cos(2.0 * pi * y) + y - 1.0) / (2.0 + sin(x * y)) + x * y * z;
}

double value_at(double x, double y, double z)
{
  using T = dfm::Jet<double, 3>;
  return value_of(T::constant(x), T::constant(y), T::constant(z)).v;
}

// 4th-order central first derivative in direction dir.
double fd_grad(const Eigen::Vector3d& p, int dir, double h)
{
  auto f = [&](double t) {
    Eigen::Vector3d q = p;
    q(dir) += t;
    return value_at(q.x(), q.y(), q.z());
  };
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

// 4th-order central second derivative; mixed entries use the nested first-derivative stencil.
double fd_hess(const Eigen::Vector3d& p, int a, int b, double h)
{
  if (a == b) {
    auto f = [&](double t) {
      Eigen::Vector3d q = p;
      q(a) += t;
      return value_at(q.x(), q.y(), q.z());
    };
    return (-f(2 * h) + 16 * f(h) - 30 * f(0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
  }
  const double c[4] = {-1.0, 8.0, -8.0, 1.0};
  const double s[4] = {2.0, 1.0, -1.0, -2.0};
  double acc = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector3d q = p;
      q(a) += s[i] * h;
      q(b) += s[j] * h;
      acc += c[i] * c[j] * value_at(q.x(), q.y(), q.z());
    }
  return acc / (144 * h * h);
}

} // namespace

TEST_CASE("jet matches 4th-order central differences", "[jet]")
{
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> unif(-0.45, 0.45);
  const double h = 1e-3;

  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Vector3d p(unif(rng), unif(rng), unif(rng));
    const Jet3 jx = Jet3::variable(p.x(), 0);
    const Jet3 jy = Jet3::variable(p.y(), 1);
    const Jet3 jz = Jet3::variable(p.z(), 2);
    const Jet3 f = value_of(jx, jy, jz);

    const double scale = std::max(1.0, std::abs(f.v));
    for (int a = 0; a < 3; ++a) {
      REQUIRE(f.g(a) == Catch::Approx(fd_grad(p, a, h)).epsilon(0.0).margin(1e-6 * scale));
      for (int b = a; b < 3; ++b)
        REQUIRE(f.h(a, b) == Catch::Approx(fd_hess(p, a, b, h)).epsilon(0.0).margin(1e-6 * scale * 10));
    }
  }
}

TEST_CASE("jet algebra identities", "[jet]")
{
  const Jet3 x = Jet3::variable(0.3, 0);
  const Jet3 y = Jet3::variable(-0.2, 1);

  SECTION("product rule symmetry")
  {
    const Jet3 p = x * y;
    REQUIRE(p.h(0, 1) == Catch::Approx(1.0));
    REQUIRE(p.h(1, 0) == Catch::Approx(1.0));
    REQUIRE(p.h(0, 0) == Catch::Approx(0.0).margin(1e-15));
  }

  SECTION("division against multiplication")
  {
    const Jet3 q = (x * y) / y;
    REQUIRE(q.v == Catch::Approx(x.v));
    REQUIRE(q.g(0) == Catch::Approx(1.0));
    REQUIRE(q.g(1) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(q.h.norm() == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("sin^2 + cos^2 = 1")
  {
    const Jet3 s = sin(x) * sin(x) + cos(x) * cos(x);
    REQUIRE(s.v == Catch::Approx(1.0));
    REQUIRE(s.g.norm() == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(s.h.norm() == Catch::Approx(0.0).margin(1e-14));
  }
}
