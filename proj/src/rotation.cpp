#include "holofisher/rotation.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "holofisher/rng.hpp"

namespace holofisher {

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.allFinite()) throw Error("not a rotation: non-finite entries");
  const double orth = (m.transpose() * m - Mat3::Identity()).norm();
  if (orth > kTol) throw Error("not a rotation: orthogonality residual " + std::to_string(orth));
  const double det = m.determinant();
  if (std::abs(det - 1.0) > kTol)
    throw Error("not a rotation: det = " + std::to_string(det));
  return Rotation(m);
}

Mat3 sample_mean(const std::vector<Rotation>& samples) {
  if (samples.empty()) throw Error("empty sample");
  // Kahan per entry, sequential order: identical bits regardless of build.
  Mat3 sum = Mat3::Zero();
  Mat3 comp = Mat3::Zero();
  for (const Rotation& r : samples) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double y = r.matrix()(i, j) - comp(i, j);
        const double t = sum(i, j) + y;
        comp(i, j) = (t - sum(i, j)) - y;
        sum(i, j) = t;
      }
  }
  return sum / static_cast<double>(samples.size());
}

SufficientStats signed_svd(const Mat3& m) {
  if (!m.allFinite()) throw Error("signed_svd: non-finite entries");
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  Vec3 g = svd.singularValues();  // sigma1 >= sigma2 >= sigma3 >= 0
  // Carry any reflection on the first column so that q, r land in SO(3)
  // and sign(g1) = sign(det m).
  if (u.determinant() < 0.0) {
    u.col(0) = -u.col(0);
    g(0) = -g(0);
  }
  if (v.determinant() < 0.0) {
    v.col(0) = -v.col(0);
    g(0) = -g(0);
  }
  SufficientStats stats;
  stats.q = Rotation::from_matrix(u);
  stats.r = Rotation::from_matrix(v.transpose());
  stats.g = g;
  return stats;
}

ParamMatrix reconstruct_theta(const SufficientStats& stats, const Vec3& x) {
  return ParamMatrix{stats.q.matrix() * x.asDiagonal() * stats.r.matrix()};
}

Rotation rotation_from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n; x /= n; y /= n; z /= n;
  Mat3 m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
       2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y);
  return Rotation::from_matrix(m);
}

std::vector<Rotation> haar_sample(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Rotation> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = rng.normal(), x = rng.normal(), y = rng.normal(), z = rng.normal();
    out.push_back(rotation_from_quaternion(w, x, y, z));
  }
  return out;
}

std::vector<Rotation> fisher_sample(const ParamMatrix& theta, std::uint64_t seed, std::size_t n) {
  const SufficientStats s = signed_svd(theta.t);
  const double bound = s.g.cwiseAbs().sum();  // >= tr(theta^t Y) on SO(3)
  Rng rng(seed);
  std::vector<Rotation> out;
  out.reserve(n);
  while (out.size() < n) {
    const double w = rng.normal(), x = rng.normal(), y = rng.normal(), z = rng.normal();
    Rotation cand = rotation_from_quaternion(w, x, y, z);
    const double log_ratio = (theta.t.transpose() * cand.matrix()).trace() - bound;
    if (rng.uniform_pos() <= std::exp(log_ratio)) out.push_back(cand);
  }
  return out;
}

Rotation rotation_from_vector_pair(const Vec3& v1, const Vec3& v2) {
  if (!v1.allFinite() || !v2.allFinite()) throw Error("degenerate frame");
  const double n1 = v1.norm();
  if (n1 < 1e-300) throw Error("degenerate frame");
  const Vec3 e1 = v1 / n1;
  Vec3 w = v2 - (e1.dot(v2)) * e1;
  const double nw = w.norm();
  if (!(nw > 1e-10 * v2.norm()) || v2.norm() < 1e-300) throw Error("degenerate frame");
  const Vec3 e2 = w / nw;
  Mat3 m;
  m.col(0) = e1;
  m.col(1) = e2;
  m.col(2) = e1.cross(e2);
  return Rotation::from_matrix(m);
}

}  // namespace holofisher
