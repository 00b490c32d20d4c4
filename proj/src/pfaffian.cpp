#include "holofisher/pfaffian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace holofisher {

double sing_distance(const Vec3& x) {
  double d = std::abs(x(0) - x(1));
  d = std::min(d, std::abs(x(0) + x(1)));
  d = std::min(d, std::abs(x(0) - x(2)));
  d = std::min(d, std::abs(x(0) + x(2)));
  d = std::min(d, std::abs(x(1) - x(2)));
  d = std::min(d, std::abs(x(1) + x(2)));
  return d;
}

Mat4 pfaffian_matrix(int i, const Vec3& x) {
  if (i < 1 || i > 3) throw Error("pfaffian_matrix: axis must be 1, 2 or 3");
  if (sing_distance(x) <= 0.0)
    throw SingularLocusError("Pfaffian singular at x = (" + std::to_string(x(0)) + ", " +
                             std::to_string(x(1)) + ", " + std::to_string(x(2)) + ")");
  const double x1 = x(0), x2 = x(1), x3 = x(2);
  const double d12 = x1 * x1 - x2 * x2, d21 = -d12;
  const double d13 = x1 * x1 - x3 * x3, d31 = -d13;
  const double d23 = x2 * x2 - x3 * x3, d32 = -d23;
  Mat4 p;
  switch (i) {
    case 1:
      p << 0, 1, 0, 0,
           1, x1 * (-2 * x1 * x1 + x2 * x2 + x3 * x3) / (d13 * d12), x2 / d12, x3 / d13,
           0, x2 / d12, -x1 / d12, 1,
           0, x3 / d13, 1, -x1 / d13;
      break;
    case 2:
      p << 0, 0, 1, 0,
           0, -x2 / d21, x1 / d21, 1,
           1, x1 / d21, x2 * (x1 * x1 - 2 * x2 * x2 + x3 * x3) / (d21 * d23), x3 / d23,
           0, 1, x3 / d23, -x2 / d23;
      break;
    default:
      p << 0, 0, 0, 1,
           0, -x3 / d31, 1, x1 / d31,
           0, 1, -x3 / d32, x2 / d32,
           1, x1 / d31, x2 / d32, x3 * (x1 * x1 + x2 * x2 - 2 * x3 * x3) / (d31 * d32);
      break;
  }
  return p;
}

Mat4 radial_matrix(const Vec3& x, double t) {
  if (!(t > 0.0)) throw Error("radial_matrix: t must be positive");
  const double x1 = x(0), x2 = x(1), x3 = x(2);
  const double d = -2.0 / t;
  Mat4 m;
  m << 0,  x1, x2, x3,
       x1, d,  x3, x2,
       x2, x3, d,  x1,
       x3, x2, x1, d;
  return m;
}

double lambda0(const Vec3& x) {
  Mat4 a = radial_matrix(x, 1.0);
  a.diagonal().setZero();
  Eigen::SelfAdjointEigenSolver<Mat4> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Mat3 hessian_from_C(const Vec3& x, const CVector& c) {
  const Vec4 p1c = pfaffian_matrix(1, x) * c;
  const Vec4 p2c = pfaffian_matrix(2, x) * c;
  const Vec4 p3c = pfaffian_matrix(3, x) * c;
  Mat3 h;
  h(0, 0) = p1c(1);
  h(0, 1) = h(1, 0) = p2c(1);
  h(0, 2) = h(2, 0) = p3c(1);
  h(1, 1) = p2c(2);
  h(1, 2) = h(2, 1) = p3c(2);
  h(2, 2) = p3c(3);
  return h;
}

std::array<int, 6> chamber_signs(const Vec3& x) {
  const double f[6] = {x(0) - x(1), x(0) + x(1), x(0) - x(2),
                       x(0) + x(2), x(1) - x(2), x(1) + x(2)};
  std::array<int, 6> s;
  for (int i = 0; i < 6; ++i) s[i] = f[i] > 0 ? 1 : (f[i] < 0 ? -1 : 0);
  return s;
}

std::array<Vec3, 24> chamber_representatives() {
  // Signed permutations of (3,2,1) hit every chamber; the 48 of them cover
  // the 24 chambers twice, so deduplicate on the plane-form sign vector.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const double base[3] = {3.0, 2.0, 1.0};
  std::array<Vec3, 24> reps;
  std::vector<std::array<int, 6>> seen;
  std::size_t count = 0;
  for (const auto& perm : perms)
    for (int mask = 0; mask < 8; ++mask) {
      Vec3 v;
      for (int k = 0; k < 3; ++k)
        v(k) = ((mask >> k) & 1 ? -1.0 : 1.0) * base[perm[k]];
      const auto sig = chamber_signs(v);
      if (std::find(seen.begin(), seen.end(), sig) != seen.end()) continue;
      seen.push_back(sig);
      reps[count++] = v;
    }
  if (count != 24) throw Error("chamber_representatives: internal enumeration error");
  return reps;
}

}  // namespace holofisher
