#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holofisher/hgm.hpp"
#include "holofisher/oracle.hpp"
#include "test_util.hpp"

using namespace holofisher;

namespace {

double rel_gap(const CVector& a, const CVector& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("transport with coincident endpoints is the identity") {
  const CVector c(1.0, 0.2, 0.3, 0.4);
  IntegratorConfig cfg;
  CHECK(hgm_transport(c, Vec3(2, 1, 0.3), Vec3(2, 1, 0.3), cfg) == c);
}

TEST_CASE("transport agrees with the quadrature oracle") {
  const Vec3 a(2.0, 1.0, 0.3), b(2.5, 1.2, 0.4);
  IntegratorConfig cfg;
  cfg.method = IntegratorConfig::Method::rk4_fixed;
  cfg.steps = 1000;
  const CVector got = hgm_transport(C_quad(a), a, b, cfg);
  CHECK(rel_gap(got, C_quad(b)) < 1e-7);

  // reversal recovers the start
  const CVector back = hgm_transport(got, b, a, cfg);
  CHECK(rel_gap(back, C_quad(a)) < 1e-6);
}

TEST_CASE("transport detects paths through the singular locus") {
  IntegratorConfig cfg;
  const CVector c = C_quad(Vec3(2, 1, 0.3));
  try {
    hgm_transport(c, Vec3(2, 1, 0.3), Vec3(1, 2, 0.3), cfg);  // crosses x1 = x2
    FAIL("expected PathSingularError");
  } catch (const PathSingularError& e) {
    CHECK(e.t_cross > 0.0);
    CHECK(e.t_cross < 1.0);
    CHECK(std::abs(e.t_cross - 0.5) < 0.05);
  }
}

TEST_CASE("transport is path independent between fixed endpoints") {
  const Vec3 a(2.0, 1.0, 0.3), b(2.5, 1.2, 0.4), mid(2.6, 0.8, 0.1);
  IntegratorConfig cfg;
  REQUIRE(sing_distance(mid) > 0.1);
  const CVector direct = hgm_transport(C_quad(a), a, b, cfg);
  const CVector via = hgm_transport(hgm_transport(C_quad(a), a, mid, cfg), mid, b, cfg);
  CHECK(rel_gap(via, direct) < 1e-6);
}

TEST_CASE("rk4 step halving gains at least a factor 8") {
  const Vec3 a(2.0, 1.0, 0.3), b(2.5, 1.2, 0.4);
  IntegratorConfig tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  const CVector ref = hgm_transport(C_quad(a), a, b, tight);
  IntegratorConfig fixed;
  fixed.method = IntegratorConfig::Method::rk4_fixed;
  fixed.steps = 10;
  const double e1 = rel_gap(hgm_transport(C_quad(a), a, b, fixed), ref);
  fixed.steps = 20;
  const double e2 = rel_gap(hgm_transport(C_quad(a), a, b, fixed), ref);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("eval_C basics") {
  IntegratorConfig cfg;
  std::vector<std::string> warnings;
  const CVector c0 = eval_C(Vec3::Zero(), cfg, &warnings);
  CHECK((c0 - CVector(1, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-7);  // jitter-sized
  CHECK(!warnings.empty());  // origin lies on the locus, jitter reported

  CHECK_THROWS_AS(eval_C(Vec3(400, 250, 100), cfg), Error);  // overflow guard
  CHECK_THROWS_AS(eval_C(Vec3(std::nan(""), 0, 0), cfg), Error);
}

TEST_CASE("eval_C agrees with the quadrature oracle on random points") {
  IntegratorConfig cfg;
  Rng rng(41);
  for (int k = 0; k < 20; ++k) {
    const Vec3 x = hftest::random_off_locus(rng, 0.05);
    CHECK(rel_gap(eval_C(x, cfg), C_quad(x)) < 1e-6);
  }

  cfg.method = IntegratorConfig::Method::rk4_fixed;
  cfg.steps = 1000;
  const Vec3 x = hftest::random_off_locus(rng, 0.05);
  CHECK(rel_gap(eval_C(x, cfg), C_quad(x)) < 1e-6);
  const LogCState s = eval_logC(x, cfg);
  CHECK(std::exp(s.log_c) == doctest::Approx(C_quad(x)(0)).epsilon(1e-8));
}

TEST_CASE("eval_C jitters on-locus points and still matches the oracle") {
  IntegratorConfig cfg;
  std::vector<std::string> warnings;
  const Vec3 x(1.0, 1.0, 0.2);  // x1 = x2
  const CVector c = eval_C(x, cfg, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("jitter") != std::string::npos);
  CHECK(rel_gap(c, C_quad(x)) < 1e-6);  // c~ itself is analytic there
}

TEST_CASE("eval_logC is exp-consistent with eval_C in the overlap range") {
  IntegratorConfig cfg;
  Rng rng(42);
  for (int k = 0; k < 10; ++k) {
    const Vec3 x = hftest::random_off_locus(rng, 0.05);
    const CVector c = eval_C(x, cfg);
    const LogCState s = eval_logC(x, cfg);
    CHECK(std::exp(s.log_c) == doctest::Approx(c(0)).epsilon(1e-8));
    for (int i = 0; i < 3; ++i)
      CHECK(s.u(i) == doctest::Approx(c(i + 1) / c(0)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("eval_logC matches the log-scale oracle far outside double range of c~") {
  IntegratorConfig cfg;
  const Vec3 x(100.0, 50.0, 20.0);
  const LogCState s = eval_logC(x, cfg);
  CHECK(s.log_c == doctest::Approx(log_ctilde(x)).epsilon(1e-5));
}

TEST_CASE("gradient of log c~ equals u (finite differences of eval_logC)") {
  IntegratorConfig cfg;
  const Vec3 x(1.9, 0.7, -0.6);
  const LogCState s = eval_logC(x, cfg);
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e(i) = 1e-4;
    const double fd =
        (eval_logC(x + e, cfg).log_c - eval_logC(x - e, cfg).log_c) / (2e-4);
    CHECK(fd == doctest::Approx(s.u(i)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("heel-data point: stationarity at the published estimate") {
  IntegratorConfig cfg;
  const Vec3 x_hat(5543.106, 3753.078, -3685.242);
  const Vec3 g(0.9997, 0.9926, 0.9923);
  const LogCState s = eval_logC(x_hat, cfg);
  CHECK((g - s.u).cwiseAbs().maxCoeff() < 1e-4);
  // frozen against an independent quadrature+ODE implementation
  CHECK(s.log_c == doctest::Approx(5598.8910343).epsilon(2e-7));
}

TEST_CASE("integrator config validation") {
  IntegratorConfig cfg;
  cfg.steps = 5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.t0 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
