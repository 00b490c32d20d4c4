#pragma once

#include <array>

#include "holofisher/types.hpp"

namespace holofisher {

/// min over i<j of |x_i - x_j| and |x_i + x_j|: plane-form proxy for the
/// distance to the singular locus (zero exactly on it).
double sing_distance(const Vec3& x);

/// Pfaffian connection matrix P_i (i in 1..3) at x, so that d_i C = P_i C.
/// Throws SingularLocusError on the locus.
Mat4 pfaffian_matrix(int i, const Vec3& x);

/// Coefficient matrix of the radial ODE dC/dt = M(x,t) C along t -> t*x:
/// zero/symmetric off-diagonal pattern in (x1,x2,x3), diagonal
/// (0, -2/t, -2/t, -2/t). Throws Error for t <= 0.
Mat4 radial_matrix(const Vec3& x, double t);

/// Largest eigenvalue of the symmetric gauge matrix A (the radial matrix
/// with zero diagonal). Equals max exponent of the Fisher density, so the
/// gauge-transformed vector D = C exp(-lambda0 t) stays bounded.
double lambda0(const Vec3& x);

/// Second partials of c~ assembled from the Pfaffian products:
/// d1d1 = (P1 C)_2, d1d2 = (P2 C)_2, d1d3 = (P3 C)_2,
/// d2d2 = (P2 C)_3, d2d3 = (P3 C)_3, d3d3 = (P3 C)_4 (1-based rows).
Mat3 hessian_from_C(const Vec3& x, const CVector& c);

/// One interior point per connected component of R^3 minus the six planes
/// x_i = +-x_j; exactly 24 of them.
std::array<Vec3, 24> chamber_representatives();

/// Sign pattern of the six plane forms (x1-x2, x1+x2, x1-x3, x1+x3,
/// x2-x3, x2+x3); labels the chamber of x.
std::array<int, 6> chamber_signs(const Vec3& x);

}  // namespace holofisher
