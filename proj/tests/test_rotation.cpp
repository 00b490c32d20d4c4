#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holofisher/oracle.hpp"
#include "holofisher/rotation.hpp"
#include "test_util.hpp"

using namespace holofisher;

namespace {

Mat3 random_matrix(Rng& rng, double scale) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.uniform(-scale, scale);
  return m;
}

}  // namespace

TEST_CASE("rotation invariants are enforced") {
  CHECK_NOTHROW(Rotation::from_matrix(Mat3::Identity()));
  Mat3 bad = Mat3::Identity();
  bad(0, 0) = 1.001;
  CHECK_THROWS_AS(Rotation::from_matrix(bad), Error);
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1.0;  // orthogonal but det = -1
  CHECK_THROWS_AS(Rotation::from_matrix(reflection), Error);
}

TEST_CASE("sample_mean basics") {
  CHECK_THROWS_WITH_AS(sample_mean({}), "empty sample", Error);

  const std::vector<Rotation> one{Rotation::identity()};
  CHECK((sample_mean(one) - Mat3::Identity()).norm() == 0.0);

  // mean of {Y, Y^t} is symmetric
  const Rotation y = haar_sample(5, 1)[0];
  const Rotation yt = Rotation::from_matrix(y.matrix().transpose());
  const Mat3 m = sample_mean({y, yt});
  CHECK((m - m.transpose()).norm() < 1e-15);
}

TEST_CASE("signed_svd on the synthetic-example mean matches the published values") {
  const Mat3 ybar = hftest::load_mean("synthetic500_mean.csv");
  const SufficientStats s = signed_svd(ybar);
  CHECK(std::abs(s.g(0) - 0.5946) < 1e-3);
  CHECK(std::abs(s.g(1) - 0.1838) < 1e-3);
  CHECK(std::abs(s.g(2) - 0.1059) < 1e-3);
  CHECK((s.q.matrix() * s.g.asDiagonal() * s.r.matrix() - ybar).norm() < 1e-10);
}

TEST_CASE("signed_svd special cases") {
  const SufficientStats id = signed_svd(Mat3::Identity());
  CHECK((id.g - Vec3(1, 1, 1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((id.q.matrix() * id.r.matrix() - Mat3::Identity()).norm() < 1e-12);

  const Mat3 d = Vec3(-2.0, 1.0, 0.5).asDiagonal();
  const SufficientStats s = signed_svd(d);
  CHECK((s.g - Vec3(-2.0, 1.0, 0.5)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s.q.matrix() * s.g.asDiagonal() * s.r.matrix() - d).norm() < 1e-12);
  CHECK(std::abs(s.q.matrix().determinant() - 1.0) < 1e-12);
  CHECK(std::abs(s.r.matrix().determinant() - 1.0) < 1e-12);

  Mat3 nan = Mat3::Zero();
  nan(1, 1) = std::nan("");
  CHECK_THROWS_AS(signed_svd(nan), Error);
}

TEST_CASE("signed_svd properties on random matrices") {
  Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    const Mat3 m = random_matrix(rng, k % 2 ? 3.0 : 0.3);
    const SufficientStats s = signed_svd(m);
    CHECK((s.q.matrix() * s.g.asDiagonal() * s.r.matrix() - m).norm() < 1e-10);
    CHECK(std::abs(s.g(0)) >= s.g(1));
    CHECK(s.g(1) >= s.g(2));
    CHECK(s.g(2) >= 0.0);
    const double det = m.determinant();
    if (std::abs(det) > 1e-12) CHECK(s.g(0) * det > 0.0);
  }
}

TEST_CASE("reconstruct_theta") {
  const Mat3 ybar = hftest::load_mean("synthetic500_mean.csv");
  const SufficientStats s = signed_svd(ybar);

  const Mat3 theta_hat = hftest::load_mean("synthetic500_theta_hat.csv");
  const ParamMatrix rec = reconstruct_theta(s, Vec3(2.422, 0.7432, -0.3043));
  CHECK((rec.t - theta_hat).cwiseAbs().maxCoeff() < 2e-3);

  CHECK(reconstruct_theta(s, Vec3::Zero()).t.norm() == 0.0);
  CHECK((reconstruct_theta(s, s.g).t - ybar).norm() < 1e-12);
}

TEST_CASE("haar_sample moments and determinism") {
  const std::size_t n = 100000;
  const auto samples = haar_sample(42, n);
  REQUIRE(samples.size() == n);

  const Mat3 mean = sample_mean(samples);
  const double se_mean = std::sqrt((1.0 / 3.0) / n);
  CHECK(mean.cwiseAbs().maxCoeff() < 3.0 * se_mean * 1.5);  // 9 entries, allow slack

  double m2 = 0.0;
  for (const auto& r : samples) m2 += r.matrix()(0, 0) * r.matrix()(0, 0);
  m2 /= n;
  const double se_m2 = std::sqrt((1.0 / 5.0 - 1.0 / 9.0) / n);
  CHECK(std::abs(m2 - 1.0 / 3.0) < 3.0 * se_m2);

  // conv(SO(3)) bound on the singular values of the mean
  const SufficientStats s = signed_svd(mean);
  CHECK(std::abs(s.g(0)) <= 1.0 + 1e-12);

  CHECK(haar_sample(7, 0).empty());
  const auto a = haar_sample(123, 50), b = haar_sample(123, 50);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].matrix() == b[i].matrix());  // bit-identical
}

TEST_CASE("fisher_sample: zero parameter reduces to Haar-like draws") {
  const auto samples = fisher_sample(ParamMatrix{Mat3::Zero()}, 9, 5000);
  REQUIRE(samples.size() == 5000);
  const Mat3 mean = sample_mean(samples);
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("fisher_sample matches the quadrature stationarity identity") {
  // E[Y] under theta = diag(5,0,0) is diag(u1,0,0) with u = grad c~ / c~.
  const Vec3 x(5.0, 0.0, 0.0);
  const double c = ctilde_deriv(x, {0, 0, 0});
  const double u1 = ctilde_deriv(x, {1, 0, 0}) / c;

  const Mat3 theta = Vec3(5.0, 0.0, 0.0).asDiagonal();
  const auto samples = fisher_sample(ParamMatrix{theta}, 2024, 100000);
  const SufficientStats s = signed_svd(sample_mean(samples));
  CHECK(std::abs(s.g(0) - u1) < 0.01);

  const auto again = fisher_sample(ParamMatrix{theta}, 2024, 100);
  const auto first = fisher_sample(ParamMatrix{theta}, 2024, 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(again[i].matrix() == first[i].matrix());

  CHECK(fisher_sample(ParamMatrix{theta}, 1, 0).empty());
}

TEST_CASE("rotation_from_vector_pair") {
  const Vec3 e1(1, 0, 0), e2(0, 1, 0);
  CHECK((rotation_from_vector_pair(e1, e2).matrix() - Mat3::Identity()).norm() < 1e-15);

  const Vec3 diag = (e1 + e2) / std::sqrt(2.0);
  CHECK((rotation_from_vector_pair(e1, diag).matrix() - Mat3::Identity()).norm() < 1e-12);

  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Vec3 v1(rng.normal(), rng.normal(), rng.normal());
    const Vec3 v2(rng.normal(), rng.normal(), rng.normal());
    if (v1.cross(v2).norm() < 1e-6) continue;
    const Rotation r = rotation_from_vector_pair(v1, v2);
    CHECK(std::abs(r.matrix().determinant() - 1.0) < 1e-12);
    CHECK((r.matrix().transpose() * r.matrix() - Mat3::Identity()).norm() < 1e-12);
  }

  CHECK_THROWS_WITH_AS(rotation_from_vector_pair(e1, 2.0 * e1), "degenerate frame", Error);
  CHECK_THROWS_WITH_AS(rotation_from_vector_pair(e1, Vec3::Zero()), "degenerate frame", Error);
}
