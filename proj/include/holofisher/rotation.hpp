#pragma once

#include <cstdint>
#include <vector>

#include "holofisher/types.hpp"

namespace holofisher {

/// Element of SO(3): orthogonal with determinant +1, both within 1e-10.
class Rotation {
public:
  static constexpr double kTol = 1e-10;

  /// Validates the invariants; throws Error otherwise.
  static Rotation from_matrix(const Mat3& m);

  static Rotation identity() { return Rotation(Mat3::Identity()); }

  const Mat3& matrix() const { return m_; }

private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Natural parameter of the Fisher model; any finite real 3x3 matrix.
struct ParamMatrix {
  Mat3 t = Mat3::Zero();
};

/// Sufficient statistics (Q, g, R) of a sample: the sign-preserving SVD of
/// the sample mean, plus the sample count. The data enters the likelihood
/// only through g.
struct SufficientStats {
  Rotation q = Rotation::identity();
  Rotation r = Rotation::identity();
  Vec3 g = Vec3::Zero();
  std::size_t n = 0;
};

/// Entrywise mean with compensated sequential summation (bit-stable).
/// Throws Error("empty sample") on empty input.
Mat3 sample_mean(const std::vector<Rotation>& samples);

/// Sign-preserving SVD m = q diag(g) r with q, r in SO(3),
/// |g1| >= g2 >= g3 >= 0 and sign(g1) = sign(det m) for nonsingular m.
SufficientStats signed_svd(const Mat3& m);

/// Q diag(x) R for the given statistics.
ParamMatrix reconstruct_theta(const SufficientStats& stats, const Vec3& x);

/// Scalar-first unit quaternion (w,x,y,z), right-handed, to its rotation.
Rotation rotation_from_quaternion(double w, double x, double y, double z);

/// n i.i.d. Haar-uniform rotations (normalized Gaussian 4-vectors read as
/// unit quaternions). Deterministic given seed.
std::vector<Rotation> haar_sample(std::uint64_t seed, std::size_t n);

/// n i.i.d. draws from the Fisher distribution with parameter theta, by
/// rejection from Haar with envelope exp(tr(theta^t Y) - M), M = sum|x_i|.
/// Deterministic given seed. The acceptance rate decays like
/// c~(x)/exp(M), so large ||theta|| gets slow.
std::vector<Rotation> fisher_sample(const ParamMatrix& theta, std::uint64_t seed, std::size_t n);

/// Orthonormal frame (v1', v2', v1' x v2') from two non-parallel vectors;
/// v2' is v2 Gram-Schmidt-orthonormalized against v1' = v1/|v1|.
/// Throws Error("degenerate frame") for parallel or zero inputs.
Rotation rotation_from_vector_pair(const Vec3& v1, const Vec3& v2);

}  // namespace holofisher
