#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "holofisher/checks.hpp"
#include "holofisher/oracle.hpp"
#include "holofisher/pfaffian.hpp"
#include "test_util.hpp"

using namespace holofisher;

TEST_CASE("sing_distance plane forms") {
  CHECK(sing_distance(Vec3(1, 1, 0)) == 0.0);
  CHECK(sing_distance(Vec3(2, 1, 0)) == 1.0);
  CHECK(sing_distance(Vec3(1, -1, 5)) == 0.0);  // x1 + x2 = 0
  CHECK(sing_distance(Vec3(0, 0, 0)) == 0.0);
}

TEST_CASE("pfaffian_matrix printed entries") {
  const Vec3 x(2, 1, 0);
  const Mat4 p1 = pfaffian_matrix(1, x);
  CHECK(p1(1, 0) == 1.0);
  CHECK(p1(2, 2) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(p1(0, 0) == 0.0);
  CHECK(p1(0, 1) == 1.0);

  const Mat4 p3 = pfaffian_matrix(3, Vec3(1.7, -0.4, 0.9));
  CHECK(p3(0, 0) == 0.0);
  CHECK(p3(0, 1) == 0.0);
  CHECK(p3(0, 2) == 0.0);
  CHECK(p3(0, 3) == 1.0);

  CHECK_THROWS_AS(pfaffian_matrix(1, Vec3(1, 1, 0)), SingularLocusError);
  CHECK_THROWS_AS(pfaffian_matrix(0, Vec3(2, 1, 0)), Error);
}

TEST_CASE("radial_matrix structure") {
  const Mat4 m = radial_matrix(Vec3(1, 1, 1), 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j)
        CHECK(m(i, j) == (i == 0 ? 0.0 : -2.0));
      else
        CHECK(m(i, j) == 1.0);
    }
  CHECK_THROWS_AS(radial_matrix(Vec3(1, 1, 1), 0.0), Error);
  CHECK_THROWS_AS(radial_matrix(Vec3(1, 1, 1), -0.5), Error);
}

TEST_CASE("radial matrix equals the x-weighted Pfaffian combination on rays") {
  Rng rng(31);
  for (int k = 0; k < 10; ++k) {
    const Vec3 x = hftest::random_off_locus(rng, 0.3);
    const double t = rng.uniform(0.3, 1.0);
    if (sing_distance(t * x) <= 1e-6) continue;
    const CVector c = C_quad(t * x);
    CVector lhs = CVector::Zero();
    for (int i = 1; i <= 3; ++i) lhs += x(i - 1) * (pfaffian_matrix(i, t * x) * c);
    const CVector rhs = radial_matrix(x, t) * c;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8 * rhs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("lambda0") {
  CHECK(lambda0(Vec3(1, 1, 1)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(lambda0(Vec3(0, 0, 0))) < 1e-14);
  Rng rng(32);
  for (int k = 0; k < 50; ++k) {
    const Vec3 x(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9));
    const double l = lambda0(x);
    CHECK(l >= -1e-12);
    CHECK(l <= x.cwiseAbs().sum() + 1e-12);  // Gershgorin
    // closed form through the quaternion diagonalization
    CHECK(l == doctest::Approx(max_exponent(x)).epsilon(1e-12));
  }
}

TEST_CASE("hessian_from_C against order-2 quadratures") {
  const Vec3 x(1.5, 0.8, 0.2);
  const QuadratureGrid g{40, 24, 40};
  const CVector c = C_quad(x, g);
  const Mat3 h = hessian_from_C(x, c);
  CHECK(h == h.transpose());  // symmetric by construction

  const double d11 = ctilde_deriv(x, {2, 0, 0}, g);
  const double d22 = ctilde_deriv(x, {0, 2, 0}, g);
  const double d33 = ctilde_deriv(x, {0, 0, 2}, g);
  const double d12 = ctilde_deriv(x, {1, 1, 0}, g);
  const double d13 = ctilde_deriv(x, {1, 0, 1}, g);
  const double d23 = ctilde_deriv(x, {0, 1, 1}, g);
  CHECK(h(0, 0) == doctest::Approx(d11).epsilon(1e-6));
  CHECK(h(1, 1) == doctest::Approx(d22).epsilon(1e-6));
  CHECK(h(2, 2) == doctest::Approx(d33).epsilon(1e-6));
  CHECK(h(0, 1) == doctest::Approx(d12).epsilon(1e-6));
  CHECK(h(0, 2) == doctest::Approx(d13).epsilon(1e-6));
  CHECK(h(1, 2) == doctest::Approx(d23).epsilon(1e-6));

  CHECK_THROWS_AS(hessian_from_C(Vec3(1, 1, 0), c), SingularLocusError);
}

TEST_CASE("chamber representatives cover all 24 chambers") {
  const auto reps = chamber_representatives();
  std::set<std::array<int, 6>> signatures;
  for (const Vec3& r : reps) {
    CHECK(sing_distance(r) >= 1.0);
    signatures.insert(chamber_signs(r));
  }
  CHECK(signatures.size() == 24);
}

TEST_CASE("connection flatness and dC = P C (suite)") {
  for (const auto& r : checks::pfaffian_suite(10, 77)) {
    INFO(r.name, " worst ", r.worst, " tol ", r.tol);
    CHECK(r.pass);
  }
}
