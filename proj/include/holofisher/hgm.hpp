#pragma once

#include <string>
#include <vector>

#include "holofisher/types.hpp"

namespace holofisher {

/// Overflow-safe representation of the normalizing constant:
/// log c~ and u = grad c~ / c~.
struct LogCState {
  double log_c = 0.0;
  Vec3 u = Vec3::Zero();
};

struct IntegratorConfig {
  enum class Method { rk4_fixed, rkf45_adaptive };

  Method method = Method::rkf45_adaptive;
  int steps = 1000;        // rk4_fixed step count
  double rel_tol = 1e-10;  // rkf45
  double abs_tol = 1e-12;  // rkf45
  /// Radial start in (0,1). The effective start of eval_C/eval_logC is
  /// min(t0, radial_cap/|x|_inf) so the quadrature initializer never sees a
  /// point with |.|_inf beyond radial_cap.
  double t0 = 0.1;
  double radial_cap = 30.0;
  /// hgm_transport refuses segments whose distance to the singular locus
  /// drops below this.
  double sing_threshold = 0.02;

  void validate() const;  // steps >= 10, 0 < t0 < 1, tolerances > 0
};

/// Transport C along the straight segment from x_start to x_target by
/// integrating dC/dt = sum_i (x_i^target - x_i^start) P_i(x(t)) C.
/// Throws PathSingularError (with the offending t) when the segment crosses
/// or nears the singular locus.
CVector hgm_transport(const CVector& c_start, const Vec3& x_start, const Vec3& x_target,
                      const IntegratorConfig& cfg);

/// C(x) by radial integration from the quadrature initializer at t0*x.
/// Valid for any x off the singular locus; exactly-on-locus x is jittered
/// with a warning (the function c~ is analytic there, only the connection
/// degenerates). Throws Error when sum|x_i| > 700 (use eval_logC).
CVector eval_C(const Vec3& x, const IntegratorConfig& cfg,
               std::vector<std::string>* warnings = nullptr);

/// Gauge-transformed radial transport of D = C exp(-lambda0 t) with
/// periodic renormalization; returns log c~ and u for arbitrarily
/// concentrated x. Throws Error("gauge pipeline lost positivity") if the
/// leading component of D comes back nonpositive.
LogCState eval_logC(const Vec3& x, const IntegratorConfig& cfg,
                    std::vector<std::string>* warnings = nullptr);

}  // namespace holofisher
