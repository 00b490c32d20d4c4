#include "holofisher/hgm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "holofisher/oracle.hpp"
#include "holofisher/pfaffian.hpp"

namespace holofisher {
namespace {

using MatFn = std::function<Mat4(double)>;
using StepHook = std::function<void(Vec4&)>;

Vec4 rk4_fixed(const MatFn& A, Vec4 y, double ta, double tb, int steps, const StepHook& hook) {
  const double h = (tb - ta) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = ta + k * h;
    const Vec4 k1 = A(t) * y;
    const Vec4 k2 = A(t + 0.5 * h) * (y + 0.5 * h * k1);
    const Vec4 k3 = A(t + 0.5 * h) * (y + 0.5 * h * k2);
    const Vec4 k4 = A(t + h) * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (hook) hook(y);
  }
  return y;
}

// Fehlberg 4(5) with local extrapolation; error control on the inf-norm
// with mixed absolute/relative scale.
Vec4 rkf45(const MatFn& A, Vec4 y, double ta, double tb, double rel_tol, double abs_tol,
           const StepHook& hook) {
  const double span = tb - ta;
  if (span == 0.0) return y;
  double t = ta;
  double h = span / 100.0;
  const double hmin = std::abs(span) * 1e-14;
  int rejected_in_a_row = 0;
  while (t < tb) {
    h = std::min(h, tb - t);
    const Vec4 k1 = A(t) * y;
    const Vec4 k2 = A(t + h * 0.25) * (y + h * (0.25 * k1));
    const Vec4 k3 = A(t + h * 0.375) * (y + h * (3.0 / 32 * k1 + 9.0 / 32 * k2));
    const Vec4 k4 = A(t + h * 12.0 / 13) *
                    (y + h * (1932.0 / 2197 * k1 - 7200.0 / 2197 * k2 + 7296.0 / 2197 * k3));
    const Vec4 k5 = A(t + h) * (y + h * (439.0 / 216 * k1 - 8.0 * k2 + 3680.0 / 513 * k3 -
                                         845.0 / 4104 * k4));
    const Vec4 k6 = A(t + h * 0.5) *
                    (y + h * (-8.0 / 27 * k1 + 2.0 * k2 - 3544.0 / 2565 * k3 +
                              1859.0 / 4104 * k4 - 11.0 / 40 * k5));
    const Vec4 y5 = y + h * (16.0 / 135 * k1 + 6656.0 / 12825 * k3 + 28561.0 / 56430 * k4 -
                             9.0 / 50 * k5 + 2.0 / 55 * k6);
    const Vec4 y4 = y + h * (25.0 / 216 * k1 + 1408.0 / 2565 * k3 + 2197.0 / 4104 * k4 -
                             1.0 / 5 * k5);
    const double err = (y5 - y4).cwiseAbs().maxCoeff();
    const double scale =
        abs_tol + rel_tol * std::max(y.cwiseAbs().maxCoeff(), y5.cwiseAbs().maxCoeff());
    if (!(err <= scale) && h > hmin) {
      if (++rejected_in_a_row > 200) throw Error("rkf45: repeated step rejection");
      h *= std::max(0.2, 0.9 * std::pow(scale / err, 0.2));
      continue;
    }
    rejected_in_a_row = 0;
    t += h;
    y = y5;
    if (hook) hook(y);
    const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
    if (h < hmin) h = hmin;
  }
  return y;
}

Vec4 integrate(const IntegratorConfig& cfg, const MatFn& A, const Vec4& y0, double ta,
               double tb, const StepHook& hook = nullptr) {
  if (cfg.method == IntegratorConfig::Method::rk4_fixed)
    return rk4_fixed(A, y0, ta, tb, cfg.steps, hook);
  return rkf45(A, y0, ta, tb, cfg.rel_tol, cfg.abs_tol, hook);
}

// Jitter for points landing exactly on the singular locus: c~ is analytic
// there, only the connection representation degenerates.
Vec3 off_locus(const Vec3& x, std::vector<std::string>* warnings) {
  if (sing_distance(x) > 0.0) return x;
  const Vec3 dir(1.0, 2.0, 3.0);
  const double base = 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff());
  for (int k = 1; k <= 64; ++k) {
    const Vec3 cand = x + (base * k) * dir;
    if (sing_distance(cand) > 0.0) {
      if (warnings)
        warnings->push_back("x on the singular locus; jittered by " +
                            std::to_string(base * k) + " * (1,2,3)");
      return cand;
    }
  }
  throw SingularLocusError("could not jitter off the singular locus");
}

double effective_t0(const IntegratorConfig& cfg, const Vec3& x) {
  const double m = x.cwiseAbs().maxCoeff();
  double t0 = cfg.t0;
  if (m > 0.0) t0 = std::min(t0, cfg.radial_cap / m);
  return t0;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (steps < 10) throw Error("integrator: steps must be >= 10");
  if (!(t0 > 0.0 && t0 < 1.0)) throw Error("integrator: t0 must lie in (0,1)");
  if (!(rel_tol > 0.0 && abs_tol > 0.0)) throw Error("integrator: tolerances must be positive");
  if (!(radial_cap > 0.0)) throw Error("integrator: radial_cap must be positive");
}

CVector hgm_transport(const CVector& c_start, const Vec3& x_start, const Vec3& x_target,
                      const IntegratorConfig& cfg) {
  cfg.validate();
  if (!c_start.allFinite() || !x_start.allFinite() || !x_target.allFinite())
    throw Error("hgm_transport: non-finite input");
  const Vec3 d = x_target - x_start;
  if (d.isZero(0.0)) return c_start;

  // Each plane form is linear in t on the segment, so the true minimum
  // distance is available in closed form; report the worst t.
  const double f0[6] = {x_start(0) - x_start(1), x_start(0) + x_start(1),
                        x_start(0) - x_start(2), x_start(0) + x_start(2),
                        x_start(1) - x_start(2), x_start(1) + x_start(2)};
  const double fd[6] = {d(0) - d(1), d(0) + d(1), d(0) - d(2),
                        d(0) + d(2), d(1) - d(2), d(1) + d(2)};
  double min_dist = std::numeric_limits<double>::infinity();
  double t_at_min = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double a = f0[i], b = fd[i];
    double dist, t;
    if ((a < 0.0) != (a + b < 0.0) && b != 0.0) {
      dist = 0.0;
      t = -a / b;
    } else if (std::abs(a) <= std::abs(a + b)) {
      dist = std::abs(a);
      t = 0.0;
    } else {
      dist = std::abs(a + b);
      t = 1.0;
    }
    if (dist < min_dist) {
      min_dist = dist;
      t_at_min = t;
    }
  }
  if (min_dist <= cfg.sing_threshold)
    throw PathSingularError("path crosses singular locus near t = " + std::to_string(t_at_min),
                            t_at_min);

  const auto rhs = [&](double t) -> Mat4 {
    const Vec3 xt = x_start + t * d;
    return d(0) * pfaffian_matrix(1, xt) + d(1) * pfaffian_matrix(2, xt) +
           d(2) * pfaffian_matrix(3, xt);
  };
  return integrate(cfg, rhs, c_start, 0.0, 1.0);
}

CVector eval_C(const Vec3& x_in, const IntegratorConfig& cfg,
               std::vector<std::string>* warnings) {
  cfg.validate();
  if (!x_in.allFinite()) throw Error("eval_C: non-finite point");
  if (x_in.cwiseAbs().sum() > 700.0) throw Error("eval_C: overflow, use eval_logC");
  const Vec3 x = off_locus(x_in, warnings);
  const double t0 = effective_t0(cfg, x);
  const Vec3 x0 = t0 * x;
  const CVector c0 = C_quad(x0, QuadratureGrid::for_point(x0));
  const auto rhs = [&](double t) -> Mat4 { return radial_matrix(x, t); };
  return integrate(cfg, rhs, c0, t0, 1.0);
}

LogCState eval_logC(const Vec3& x_in, const IntegratorConfig& cfg,
                    std::vector<std::string>* warnings) {
  cfg.validate();
  if (!x_in.allFinite()) throw Error("eval_logC: non-finite point");
  const Vec3 x = off_locus(x_in, warnings);
  const double lam = lambda0(x);
  const double t0 = effective_t0(cfg, x);
  const Vec3 x0 = t0 * x;
  const CVector d0 = C_quad_shifted(x0, QuadratureGrid::for_point(x0), lam * t0);

  double log_scale = 0.0;
  const auto renorm = [&](Vec4& d) {
    const double m = d.cwiseAbs().maxCoeff();
    if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
      log_scale += std::log(m);
      d /= m;
    }
  };
  const auto rhs = [&](double t) -> Mat4 {
    Mat4 m = radial_matrix(x, t);
    m.diagonal().array() -= lam;
    return m;
  };
  const Vec4 d1 = integrate(cfg, rhs, d0, t0, 1.0, renorm);
  if (!(d1(0) > 0.0)) throw Error("gauge pipeline lost positivity");
  LogCState out;
  out.log_c = lam + log_scale + std::log(d1(0));
  out.u = d1.tail<3>() / d1(0);
  return out;
}

}  // namespace holofisher
