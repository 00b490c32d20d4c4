#pragma once

#include <array>

#include "holofisher/types.hpp"

namespace holofisher {

/// Product quadrature over SO(3) in ZXZ Euler angles: periodic trapezoid in
/// alpha and gamma on [0,2pi), Gauss-Legendre in u = cos(beta) on [-1,1].
/// The Haar weight sin(beta)/(8 pi^2) is absorbed by the substitution.
struct QuadratureGrid {
  int n_alpha = 24;
  int n_u = 16;
  int n_gamma = 24;

  /// Default node counts scaled to the evaluation point: the integrand
  /// concentrates at rate |x|, so counts grow linearly with |x|_inf.
  static QuadratureGrid for_point(const Vec3& x);

  void validate() const;  // all counts >= 4
};

/// Multi-index (a1,a2,a3) of a partial derivative of c~, |a| <= 4.
struct DerivOrder {
  int a1 = 0, a2 = 0, a3 = 0;
  int total() const { return a1 + a2 + a3; }
};

/// integral of y11^a1 y22^a2 y33^a3 exp(x1 y11 + x2 y22 + x3 y33) dHaar.
/// Differentiation under the integral: every partial derivative of c~ is a
/// fresh quadrature, not a finite difference.
/// Throws Error when sum|x_i| > 700 ("use log-scale oracle").
double ctilde_deriv(const Vec3& x, const DerivOrder& order, const QuadratureGrid& grid);
double ctilde_deriv(const Vec3& x, const DerivOrder& order);

/// The vector (c~, d1 c~, d2 c~, d3 c~) in a single quadrature pass.
CVector C_quad(const Vec3& x, const QuadratureGrid& grid);
CVector C_quad(const Vec3& x);

/// exp(-shift) * C_quad(x), computed without forming exp-large terms.
/// Caller must pick shift >= max exponent - 700 or so.
CVector C_quad_shifted(const Vec3& x, const QuadratureGrid& grid, double shift);

/// Overflow-safe log c~: shifts the exponent by its exact maximum over
/// SO(3) so the integrand is <= 1 pointwise. Node counts grow linearly with
/// |x|_inf, so past |x|_inf ~ 200 this gets expensive; the gauge pipeline in
/// hgm.hpp is the intended tool there.
double log_ctilde(const Vec3& x, const QuadratureGrid& grid);
double log_ctilde(const Vec3& x);

/// Residuals of the six annihilating operators applied to the quadrature c~,
/// in the order (H1, H2, H3, L12, L13, L23). All six are ~0 for correct
/// operators and converged quadrature.
/// Requires sing_distance(x) > 0.05 (rational coefficients blow up closer).
std::array<double, 6> annihilator_residual(const Vec3& x, const QuadratureGrid& grid);
std::array<double, 6> annihilator_residual(const Vec3& x);

/// Largest value of x1 y11 + x2 y22 + x3 y33 over SO(3); equals the top
/// eigenvalue of the 4x4 gauge matrix (quaternion diagonalization).
double max_exponent(const Vec3& x);

}  // namespace holofisher
