#include "holofisher/mle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "holofisher/pfaffian.hpp"

namespace holofisher {
namespace {

struct Objective {
  const Vec3& g;
  const IntegratorConfig& ode;
  std::vector<std::string>* warnings;

  LogCState state(const Vec3& x) const { return eval_logC(x, ode, warnings); }
  double value(const Vec3& x) const {
    const LogCState s = state(x);
    return x.dot(g) - s.log_c;
  }
};

MLEResult finish(Vec3 x, const Objective& obj, int iterations, OptimMethod method,
                 std::vector<std::string> warnings) {
  MLEResult r;
  r.x_hat = x;
  const LogCState s = eval_logC(x, obj.ode, &warnings);
  r.loglik = x.dot(obj.g) - s.log_c;
  r.grad_norm = (obj.g - s.u).cwiseAbs().maxCoeff();
  r.iterations = iterations;
  r.method = method;
  r.warnings = std::move(warnings);
  return r;
}

Vec3 pick_start(const Vec3& g, const OptimConfig& cfg) {
  if (cfg.start == StartRule::explicit_start) return cfg.start_x;
  return default_start(g);
}

// Inverse-Hessian BFGS on f = -l with Armijo backtracking. Function values
// are cheap through the radial/gauge pipeline, so a line search is fine here
// (the paper's caution concerns per-step transport).
MLEResult run_hbfgs(const Vec3& g, const OptimConfig& cfg, const Vec3& x0) {
  std::vector<std::string> warnings;
  Objective obj{g, cfg.ode, &warnings};
  Vec3 x = x0;
  LogCState s = obj.state(x);
  double fx = s.log_c - x.dot(g);
  Vec3 gf = s.u - g;  // grad of f
  Mat3 B = Mat3::Identity();
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    if (gf.cwiseAbs().maxCoeff() < cfg.delta) return finish(x, obj, it, OptimMethod::hbfgs, warnings);
    Vec3 d = -(B * gf);
    double slope = d.dot(gf);
    if (!(slope < 0.0)) {  // stale curvature; restart from steepest descent
      B = Mat3::Identity();
      d = -gf;
      slope = d.dot(gf);
    }
    double alpha = 1.0;
    Vec3 x_new;
    double f_new = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 50; ++ls) {
      x_new = x + alpha * d;
      f_new = -obj.value(x_new);
      if (f_new <= fx + 1e-4 * alpha * slope) {
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) {
      warnings.push_back("hbfgs: line search stalled");
      warnings.push_back("not converged");
      return finish(x, obj, it, OptimMethod::hbfgs, warnings);
    }
    const LogCState s_new = obj.state(x_new);
    const Vec3 gf_new = s_new.u - g;
    const Vec3 sv = x_new - x;
    const Vec3 yv = gf_new - gf;
    const double sy = sv.dot(yv);
    if (sy > 1e-14 * sv.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Mat3 I = Mat3::Identity();
      B = (I - rho * sv * yv.transpose()) * B * (I - rho * yv * sv.transpose()) +
          rho * sv * sv.transpose();
    }
    x = x_new;
    fx = f_new;
    gf = gf_new;
  }
  warnings.push_back("not converged");
  return finish(x, obj, it, OptimMethod::hbfgs, warnings);
}

MLEResult run_newton(const Vec3& g, const OptimConfig& cfg, const Vec3& x0) {
  std::vector<std::string> warnings;
  Objective obj{g, cfg.ode, &warnings};
  Vec3 x = x0;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const LogCState s = obj.state(x);
    const Vec3 grad = g - s.u;
    if (grad.cwiseAbs().maxCoeff() < cfg.delta) return finish(x, obj, it, OptimMethod::newton, warnings);
    Vec3 step;
    bool have_newton = false;
    try {
      const CVector c_norm(1.0, s.u(0), s.u(1), s.u(2));
      const Mat3 h = s.u * s.u.transpose() - hessian_from_C(x, c_norm);
      step = -h.ldlt().solve(grad);
      have_newton = step.allFinite() && step.dot(grad) > 0.0;
    } catch (const SingularLocusError&) {
      have_newton = false;
    }
    if (!have_newton) {
      warnings.push_back("newton: Hessian unusable at iterate, gradient step taken");
      step = grad;
    }
    const double lx = x.dot(g) - s.log_c;
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec3 cand = x + alpha * step;
      if (obj.value(cand) > lx - 1e-15 * std::abs(lx)) {
        x = cand;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      warnings.push_back("newton: no ascent step found");
      warnings.push_back("not converged");
      return finish(x, obj, it, OptimMethod::newton, warnings);
    }
  }
  warnings.push_back("not converged");
  return finish(x, obj, it, OptimMethod::newton, warnings);
}

MLEResult run_hga(const Vec3& g, const OptimConfig& cfg, const Vec3& x0) {
  std::vector<std::string> warnings;
  Objective obj{g, cfg.ode, &warnings};
  Vec3 x = x0;
  int it = 0;

  if (!cfg.transport_steps) {
    for (; it < cfg.max_iter; ++it) {
      const Vec3 grad = g - obj.state(x).u;
      if (grad.cwiseAbs().maxCoeff() < cfg.delta) return finish(x, obj, it, OptimMethod::hga, warnings);
      x += cfg.gamma * grad;
    }
  } else {
    // Algorithm-2-literal mode: carry C along each update segment.
    CVector c = eval_C(x, cfg.ode, &warnings);
    for (; it < cfg.max_iter; ++it) {
      const Vec3 u = c.tail<3>() / c(0);
      const Vec3 grad = g - u;
      if (grad.cwiseAbs().maxCoeff() < cfg.delta) return finish(x, obj, it, OptimMethod::hga, warnings);
      const Vec3 x_next = x + cfg.gamma * grad;
      try {
        c = hgm_transport(c, x, x_next, cfg.ode);
      } catch (const PathSingularError&) {
        c = eval_C(x_next, cfg.ode, &warnings);  // reroute through the radial pipeline
      }
      x = x_next;
    }
  }
  warnings.push_back("not converged");
  return finish(x, obj, it, OptimMethod::hga, warnings);
}

MLEResult run_method(const Vec3& g, const OptimConfig& cfg, const Vec3& x0) {
  switch (cfg.method) {
    case OptimMethod::hga: return run_hga(g, cfg, x0);
    case OptimMethod::hbfgs: return run_hbfgs(g, cfg, x0);
    default: return run_newton(g, cfg, x0);
  }
}

}  // namespace

const char* to_string(OptimMethod m) {
  switch (m) {
    case OptimMethod::hga: return "hga";
    case OptimMethod::hbfgs: return "hbfgs";
    default: return "newton";
  }
}

OptimMethod optim_method_from_string(const std::string& s) {
  if (s == "hga") return OptimMethod::hga;
  if (s == "hbfgs") return OptimMethod::hbfgs;
  if (s == "newton") return OptimMethod::newton;
  throw Error("unknown optimizer: " + s);
}

bool MLEResult::converged() const {
  return std::find(warnings.begin(), warnings.end(), "not converged") == warnings.end();
}

void OptimConfig::validate() const {
  if (!(gamma > 0.0)) throw Error("optimizer: gamma must be positive");
  if (!(delta > 0.0)) throw Error("optimizer: delta must be positive");
  if (max_iter < 1) throw Error("optimizer: max_iter must be positive");
  ode.validate();
}

double loglik(const Vec3& x, const Vec3& g, const IntegratorConfig& cfg) {
  return x.dot(g) - eval_logC(x, cfg).log_c;
}

Vec3 grad_loglik(const Vec3& x, const Vec3& g, const IntegratorConfig& cfg) {
  return g - eval_logC(x, cfg).u;
}

Mat3 hess_loglik(const Vec3& x, const IntegratorConfig& cfg) {
  if (sing_distance(x) <= 0.0)
    throw SingularLocusError("hess_loglik: x on the singular locus");
  const LogCState s = eval_logC(x, cfg);
  const CVector c_norm(1.0, s.u(0), s.u(1), s.u(2));
  return s.u * s.u.transpose() - hessian_from_C(x, c_norm);
}

Vec3 default_start(const Vec3& g) {
  Vec3 x = 3.0 * g;
  const Vec3 dir(1.0, 2.0, 3.0);
  for (int k = 1; sing_distance(x) < 1e-3 && k <= 64; ++k) x += (k * 1e-3) * dir;
  return x;
}

MLEResult hga(const Vec3& g, const OptimConfig& cfg) {
  cfg.validate();
  OptimConfig c = cfg;
  c.method = OptimMethod::hga;
  return run_method(g, c, pick_start(g, cfg));
}

MLEResult hbfgs(const Vec3& g, const OptimConfig& cfg) {
  cfg.validate();
  OptimConfig c = cfg;
  c.method = OptimMethod::hbfgs;
  return run_method(g, c, pick_start(g, cfg));
}

MLEResult newton(const Vec3& g, const OptimConfig& cfg) {
  cfg.validate();
  OptimConfig c = cfg;
  c.method = OptimMethod::newton;
  return run_method(g, c, pick_start(g, cfg));
}

MLEResult fit(const std::vector<Rotation>& samples, const OptimConfig& cfg) {
  SufficientStats stats = signed_svd(sample_mean(samples));
  stats.n = samples.size();
  return fit(stats, cfg);
}

MLEResult fit(const SufficientStats& stats, const OptimConfig& cfg) {
  cfg.validate();
  if (stats.g(2) > cfg.concentration_guard && !cfg.force_gauge)
    throw ConcentrationError(
        "data too concentrated (g3 = " + std::to_string(stats.g(2)) +
        " > " + std::to_string(cfg.concentration_guard) +
        "): the normalizing constant is astronomically large; "
        "pass --force-gauge to run the gauge pipeline anyway");

  MLEResult best;
  if (cfg.start == StartRule::multistart_chambers) {
    // One start per chamber, scaled to the magnitude of the default start.
    const Vec3 x0 = default_start(stats.g);
    const double scale = std::max(x0.norm(), 0.1) / Vec3(3.0, 2.0, 1.0).norm();
    bool first = true;
    double spread = 0.0;
    for (const Vec3& rep : chamber_representatives()) {
      const MLEResult r = run_method(stats.g, cfg, scale * rep);
      if (first || r.loglik > best.loglik + 1e-15 ||
          (std::abs(r.loglik - best.loglik) <= 1e-15 &&
           std::lexicographical_compare(r.x_hat.data(), r.x_hat.data() + 3,
                                        best.x_hat.data(), best.x_hat.data() + 3))) {
        if (!first) spread = std::max(spread, (r.x_hat - best.x_hat).cwiseAbs().maxCoeff());
        best = r;
      } else {
        spread = std::max(spread, (r.x_hat - best.x_hat).cwiseAbs().maxCoeff());
      }
      first = false;
    }
    if (spread > 1e-6)
      best.warnings.push_back("multistart: chamber starts disagree by " + std::to_string(spread));
  } else {
    best = run_method(stats.g, cfg, pick_start(stats.g, cfg));
  }
  best.theta_hat = reconstruct_theta(stats, best.x_hat);
  return best;
}

double loglik_param(const ParamMatrix& theta, const Mat3& ybar, const IntegratorConfig& cfg) {
  const SufficientStats s = signed_svd(theta.t);
  return (theta.t.transpose() * ybar).trace() - eval_logC(s.g, cfg).log_c;
}

}  // namespace holofisher
