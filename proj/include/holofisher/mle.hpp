#pragma once

#include <string>
#include <vector>

#include "holofisher/hgm.hpp"
#include "holofisher/rotation.hpp"

namespace holofisher {

enum class OptimMethod { hga, hbfgs, newton };
enum class StartRule { auto_start, explicit_start, multistart_chambers };

const char* to_string(OptimMethod m);
OptimMethod optim_method_from_string(const std::string& s);

struct MLEResult {
  Vec3 x_hat = Vec3::Zero();
  ParamMatrix theta_hat;
  double loglik = 0.0;
  double grad_norm = 0.0;  // |grad l|_inf at x_hat
  int iterations = 0;
  OptimMethod method = OptimMethod::newton;
  std::vector<std::string> warnings;

  bool converged() const;
};

struct OptimConfig {
  OptimMethod method = OptimMethod::newton;
  double gamma = 1e-2;   // HGA learning rate
  double delta = 1e-8;   // stop when |grad l|_inf < delta
  int max_iter = 50000;  // HGA needs tens of thousands; hbfgs/newton far fewer
  StartRule start = StartRule::auto_start;
  Vec3 start_x = Vec3::Zero();
  /// Algorithm-2-literal mode: carry C between iterates by segment
  /// transport instead of radial re-evaluation. Falls back to radial
  /// re-evaluation whenever a segment would cross the singular locus.
  bool transport_steps = false;
  bool force_gauge = false;            // override the concentration guard in fit()
  double concentration_guard = 0.9999; // refuse when g3 exceeds this
  IntegratorConfig ode;

  void validate() const;  // gamma > 0, delta > 0
};

/// l(x) = x.g - log c~(x), the per-sample mean log-likelihood.
double loglik(const Vec3& x, const Vec3& g, const IntegratorConfig& cfg = {});

/// grad l = g - u with u = grad c~ / c~.
Vec3 grad_loglik(const Vec3& x, const Vec3& g, const IntegratorConfig& cfg = {});

/// Hessian of l from the Pfaffian products applied to (1, u); negative
/// semidefinite in exact arithmetic. Throws SingularLocusError on the locus.
Mat3 hess_loglik(const Vec3& x, const IntegratorConfig& cfg = {});

/// x0 = 3g (small-x identity u ~ x/3), nudged to sing_distance >= 1e-3.
Vec3 default_start(const Vec3& g);

MLEResult hga(const Vec3& g, const OptimConfig& cfg);
MLEResult hbfgs(const Vec3& g, const OptimConfig& cfg);
MLEResult newton(const Vec3& g, const OptimConfig& cfg);

/// Full pipeline: sample mean -> signed SVD -> optimizer -> Q diag(x) R.
/// Refuses (ConcentrationError) when g3 > concentration_guard unless
/// force_gauge is set.
MLEResult fit(const std::vector<Rotation>& samples, const OptimConfig& cfg);
MLEResult fit(const SufficientStats& stats, const OptimConfig& cfg);

/// Mean log-likelihood of an arbitrary parameter matrix against a sample
/// mean: tr(theta^t ybar) - log c~(x_theta). Used for likelihood-ratio
/// diagnostics against the MLE.
double loglik_param(const ParamMatrix& theta, const Mat3& ybar,
                    const IntegratorConfig& cfg = {});

}  // namespace holofisher
