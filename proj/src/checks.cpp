#include "holofisher/checks.hpp"

#include <cmath>
#include <complex>

#include "holofisher/oracle.hpp"
#include "holofisher/pfaffian.hpp"
#include "holofisher/rng.hpp"
#include "holofisher/rotation.hpp"
#include "holofisher/su2.hpp"
#include "holofisher/types.hpp"

namespace holofisher::checks {
namespace {

Vec3 random_point(Rng& rng, double min_sing) {
  for (;;) {
    const Vec3 x(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    if (sing_distance(x) > min_sing) return x;
  }
}

CheckResult make(const std::string& name, double worst, double tol, int trials,
                 const std::string& note = {}) {
  CheckResult r;
  r.name = name;
  r.worst = worst;
  r.tol = tol;
  r.pass = trials == 0 || worst <= tol;
  r.note = trials == 0 ? "vacuous: zero trials" : note;
  return r;
}

// Richardson-extrapolated central difference of P_i entries along axis j.
Mat4 dP(int i, int j, const Vec3& x, double h) {
  Vec3 e = Vec3::Zero();
  e(j) = 1.0;
  const auto cd = [&](double hh) -> Mat4 {
    return (pfaffian_matrix(i, x + hh * e) - pfaffian_matrix(i, x - hh * e)) / (2.0 * hh);
  };
  return (4.0 * cd(h / 2.0) - cd(h)) / 3.0;
}

}  // namespace

std::vector<CheckResult> pfaffian_suite(int trials, std::uint64_t seed) {
  Rng rng(seed);
  double worst_flat = 0.0, worst_ode = 0.0, worst_radial = 0.0;
  for (int k = 0; k < trials; ++k) {
    // Flatness of the connection: d_j P_i + P_i P_j symmetric in (i,j).
    {
      const Vec3 x = random_point(rng, 0.3);
      for (int i = 1; i <= 3; ++i)
        for (int j = i + 1; j <= 3; ++j) {
          const Mat4 pi = pfaffian_matrix(i, x), pj = pfaffian_matrix(j, x);
          const Mat4 defect = dP(i, j - 1, x, 1e-5) + pi * pj - dP(j, i - 1, x, 1e-5) - pj * pi;
          worst_flat = std::max(worst_flat, defect.cwiseAbs().maxCoeff());
        }
    }
    // d_i C = P_i C against finite differences of the quadrature C.
    {
      const Vec3 x = random_point(rng, 0.3);
      const QuadratureGrid grid{40, 24, 40};  // fixed grid so the FD sees a smooth function
      const CVector c = C_quad(x, grid);
      const double h = 1e-4;
      for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e(i) = 1.0;
        const CVector fd = (C_quad(x + h * e, grid) - C_quad(x - h * e, grid)) / (2.0 * h);
        const CVector pc = pfaffian_matrix(i + 1, x) * c;
        worst_ode = std::max(worst_ode,
                             (fd - pc).cwiseAbs().maxCoeff() / pc.cwiseAbs().maxCoeff());
      }
    }
    // Radial identity: sum_i x_i P_i(t x) C = radial_matrix(x, t) C on rays.
    {
      const Vec3 x = random_point(rng, 0.3);
      const double t = rng.uniform(0.3, 1.0);
      if (sing_distance(t * x) <= 0.0) continue;
      const CVector c = C_quad(t * x);
      CVector lhs = CVector::Zero();
      for (int i = 1; i <= 3; ++i) lhs += x(i - 1) * (pfaffian_matrix(i, t * x) * c);
      const CVector rhs = radial_matrix(x, t) * c;
      worst_radial = std::max(worst_radial,
                              (lhs - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff());
    }
  }
  return {make("pfaffian.flatness", worst_flat, 1e-6, trials),
          make("pfaffian.dC_eq_PiC", worst_ode, 1e-5, trials),
          make("pfaffian.radial_ray", worst_radial, 1e-8, trials)};
}

std::vector<CheckResult> annihilator_suite(int trials, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Vec3 x = random_point(rng, 0.1);
    const auto res = annihilator_residual(x);
    const double c = ctilde_deriv(x, {0, 0, 0});
    for (double r : res) worst = std::max(worst, std::abs(r) / c);
  }
  return {make("annihilators.H_L_residuals", worst, 1e-6, trials)};
}

std::vector<CheckResult> symmetry_suite(int trials, std::uint64_t seed) {
  Rng rng(seed);
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static const double flips[3][3] = {{-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Vec3 x(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    const double ref = ctilde_deriv(x, {0, 0, 0});
    for (const auto& p : perms) {
      const Vec3 xp(x(p[0]), x(p[1]), x(p[2]));
      worst = std::max(worst, std::abs(ctilde_deriv(xp, {0, 0, 0}) - ref) / ref);
    }
    for (const auto& f : flips) {
      const Vec3 xf(f[0] * x(0), f[1] * x(1), f[2] * x(2));
      worst = std::max(worst, std::abs(ctilde_deriv(xf, {0, 0, 0}) - ref) / ref);
    }
  }
  return {make("symmetry.perm_and_double_flip", worst, 1e-10, trials)};
}

std::vector<CheckResult> su2_suite(int trials, std::uint64_t seed) {
  using cplx = std::complex<double>;
  Rng rng(seed);

  // Annihilation x phi'' + 2 phi' - phi = 0 on the unit disk.
  double worst_ode = 0.0;
  for (int k = 0; k < trials; ++k) {
    const double r = std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 2.0 * M_PI);
    const cplx x = r * cplx(std::cos(a), std::sin(a));
    const cplx res = x * phi_deriv(x, 2) + 2.0 * phi_deriv(x, 1) - phi(x);
    worst_ode = std::max(worst_ode, std::abs(res));
  }

  // Monte-Carlo Haar oracle: E[exp(tr(theta^t Y))] over Haar-uniform SU(2)
  // (complex expectation; Y from uniform unit quaternions) against
  // phi(det theta), within 3 standard errors.
  double worst_sigmas = 0.0;
  const int n_theta = trials == 0 ? 0 : std::max(1, std::min(10, trials));
  const std::size_t n_mc = 1000000;
  std::vector<double> qw(n_mc), qx(n_mc), qy(n_mc), qz(n_mc);
  if (n_theta > 0) {
    Rng qrng(seed + 1);
    for (std::size_t i = 0; i < n_mc; ++i) {
      double w = qrng.normal(), x = qrng.normal(), y = qrng.normal(), z = qrng.normal();
      const double nq = std::sqrt(w * w + x * x + y * y + z * z);
      qw[i] = w / nq; qx[i] = x / nq; qy[i] = y / nq; qz[i] = z / nq;
    }
  }
  for (int k = 0; k < n_theta; ++k) {
    Eigen::Matrix2cd theta;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        theta(r, c) = cplx(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    cplx mean = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
      // Y = [[w+ix, y+iz], [-y+iz, w-ix]] in SU(2); tr(theta^t Y).
      const cplx y11(qw[i], qx[i]), y12(qy[i], qz[i]);
      const cplx y21(-qy[i], qz[i]), y22(qw[i], -qx[i]);
      const cplx v = std::exp(theta(0, 0) * y11 + theta(1, 0) * y12 +
                              theta(0, 1) * y21 + theta(1, 1) * y22);
      mean += v;
      sq += std::norm(v);
    }
    mean /= static_cast<double>(n_mc);
    const double var = sq / static_cast<double>(n_mc) - std::norm(mean);
    const double se = std::sqrt(std::max(var, 1e-300) / static_cast<double>(n_mc));
    const double dev = std::abs(mean - su2_normalizer(theta));
    worst_sigmas = std::max(worst_sigmas, dev / se);
  }
  return {make("su2.ode_residual", worst_ode, 1e-12, trials),
          make("su2.mc_haar_match", worst_sigmas, 3.0, trials, "units: standard errors")};
}

std::vector<CheckResult> run_suite(const std::string& name, int trials, std::uint64_t seed) {
  if (name == "pfaffian") return pfaffian_suite(trials, seed);
  if (name == "annihilators") return annihilator_suite(trials, seed);
  if (name == "symmetry") return symmetry_suite(trials, seed);
  if (name == "su2") return su2_suite(trials, seed);
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const char* s : {"pfaffian", "annihilators", "symmetry", "su2"})
      for (auto& r : run_suite(s, trials, seed)) all.push_back(std::move(r));
    return all;
  }
  throw Error("unknown check suite: " + name);
}

}  // namespace holofisher::checks
